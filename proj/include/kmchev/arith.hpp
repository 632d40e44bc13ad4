#pragma once
#include "kmchev/chevgroup.hpp"
#include "kmchev/hwmod.hpp"
#include <array>
#include <mutex>
#include <optional>

namespace kmchev {

struct IntegralityWitness {
  IVec lambda;        // module whose Z-form detected the failure
  KVec weight;        // source weight of the probe vector
  size_t basis_index; // which integral basis vector
  Rat coefficient;    // the non-integer coordinate found
  bool inverse_side = false;
};

struct IntegralityVerdict {
  bool integral = false;
  std::optional<IntegralityWitness> witness;
};

// Shared probe machinery: lazily built probe modules, resolved real-root
// witnesses and the empirically computed wtilde-conjugation signs. Caches
// use idempotent fill and are safe for concurrent readers.
class ArithContext {
public:
  explicit ArithContext(const Gcm& A, BuildOptions opts = {});

  const Gcm& gcm() const { return A_; }

  // module for lambda with depth >= min_depth (grown on demand)
  ModulePtr probe_module(const IVec& lambda, long min_depth);

  RealRoot resolve_real(const RootCoords& positive);

  // sign eps in  wtilde_i(1)^{-1} chi_beta(t) wtilde_i(1) = chi_{w_i beta}(eps t),
  // beta positive real, beta != alpha_i. The sign depends on the witnesses
  // realizing both root vectors: beta's as passed, the target's canonical.
  int m2_sign(int i, const RealRoot& beta);

  // alpha_i-coordinate of a word of positive chi letters, read off the
  // v_lambda-coefficient of the image of f_i v_lambda
  Rat alpha_coordinate(const Word& positive, int i);

  // x_{-alpha} v_lambda on the given module, realized through the witness
  Graded x_minus_vlambda(const TruncatedModule& M, const RealRoot& r);

  // probe weights lambda, lambda + w omega_i with consecutive alpha-pairings
  struct ProbePair {
    IVec lambda1, lambda2;
    Int pairing1; // <lambda1, alpha^vee); the second pairing is this + 1
  };
  ProbePair probe_pair(const RealRoot& r);

private:
  Gcm A_;
  BuildOptions opts_;
  using SignKey = std::tuple<int, RootCoords, std::vector<int>, int>;
  std::mutex mu_;
  std::map<IVec, ModulePtr> modules_;
  std::map<SignKey, int> signs_;
  std::vector<RealRoot> roots_;
  long roots_height_ = 0;
};

// Does the word map every integral basis vector (all weights to depth p,
// all modules) to integer coordinates, in both directions?
IntegralityVerdict stabilizes_zform(const ModuleCollection& C, const Word& w, long p);

struct Lemma62Report {
  IntegralityVerdict verdict;
  IVec lambda1, lambda2;
  Int pairing1, pairing2;
  Rat coeff1, coeff2; // t * pairing as read off the modules
};

// The two-weight probe of the chi_alpha(t) integrality criterion.
Lemma62Report lemma62_probe(ArithContext& ctx, const RealRoot& alpha, const Rat& t);

struct UnipotentReport {
  std::vector<Rat> params; // in letter order
  IntegralityVerdict verdict;
  std::optional<size_t> culprit; // first letter with a non-integral parameter
};

// Recovers the parameters of a descending-ordered positive unipotent word
// from highest-weight-vector probes, last letter first.
UnipotentReport unipotent_certificate(ArithContext& ctx, const ModuleCollection& C,
                                      const Word& u);

struct Sl2Step {
  std::array<Int, 4> gamma; // integer, det 1
  std::array<Rat, 4> upper; // upper triangular, det 1
};

// (p q; r s) = gamma * upper with gamma integral; requires ps - qr = 1.
Sl2Step sl2_step(const Rat& p, const Rat& q, const Rat& r, const Rat& s);

// Integer SL2 matrix as a word over chi_{+-alpha_i}(Z), wtilde_i(1) and
// h_i(-1).
Word sl2_integral_word(int i, const std::array<Int, 4>& m);

struct Factorization {
  Word gamma;
  Word b;
  long certificate_depth = -1;
  long moves = 0;
};

struct BruhatOptions {
  long budget = 10000;
  long probe_depth = 4;
  bool verify_moves = false;
  ModulePtr verify_module; // used when verify_moves is set
};

// g = gamma * b with gamma over integer-parameter letters and b a positive
// unipotent/torus word, verified blockwise on the collection up to the
// reported certificate depth.
Factorization bruhat_factor(ArithContext& ctx, const ModuleCollection& C, const Word& g,
                            const BruhatOptions& opts = {});

// Expansion into the unit-parameter alphabet chi_{+-alpha_i}(+-1); the
// parameter -1 marks the formal inverse of the corresponding chi(1).
Word reduce_to_unit_generators(const Word& w);

} // namespace kmchev
