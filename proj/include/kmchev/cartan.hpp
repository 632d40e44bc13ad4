#pragma once
#include "kmchev/linalg.hpp"
#include "kmchev/rational.hpp"
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace kmchev {

enum class CartanType { Finite, Affine, Indefinite };

struct Classification {
  CartanType type = CartanType::Indefinite;
  bool hyperbolic = false; // meaningful only for Indefinite
  bool operator==(const Classification&) const = default;
};

// A validated generalized Cartan matrix. Immutable after construction;
// symmetrizer and classification are computed on demand by the free
// functions below.
class Gcm {
public:
  // Checks the GCM axioms entry by entry; reports the offending (i, j)
  // (1-based in messages) on failure.
  static Gcm validate(const std::vector<IVec>& entries);

  size_t rank() const { return n_; }
  const Int& a(size_t i, size_t j) const { return a_[i][j]; }
  const std::vector<IVec>& entries() const { return a_; }

  bool indecomposable() const;

  // Set only for matrices produced by y_diagram.
  std::optional<std::array<long, 3>> y_params;

  bool operator==(const Gcm& o) const { return a_ == o.a_; }

private:
  Gcm(std::vector<IVec> a) : a_(std::move(a)), n_(a_.size()) {}
  std::vector<IVec> a_;
  size_t n_ = 0;
};

// Positive rational symmetrizer d with diag(d) * A symmetric, normalized
// so the minimum component is 1. Throws NotSymmetrizable.
QVec symmetrize(const Gcm& A);

// Finite / Affine / Indefinite{hyperbolic} for an indecomposable A.
// Throws Decomposable or NotSymmetrizable.
Classification classify(const Gcm& A);

// Simply-laced star with three chains of p-1, q-1 and r-1 nodes joined at
// a central node (index 0); p + q + r - 2 nodes total.
Gcm y_diagram(long p, long q, long r);

Int determinant(const Gcm& A);

struct DetReport {
  Int det;
  bool has_formula = false; // true when A came from y_diagram
  Int formula;              // pqr - pq - qr - rp
  bool equal = false;
  bool equal_abs = false;
};

DetReport determinant_report(const Gcm& A);

// |det A| as the index [P:Q]; nullopt means the index is infinite.
std::optional<Int> lattice_index(const Gcm& A);

std::string classification_str(const Classification& c);

} // namespace kmchev
