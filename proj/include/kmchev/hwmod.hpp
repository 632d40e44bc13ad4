#pragma once
#include "kmchev/cartan.hpp"
#include "kmchev/linalg.hpp"
#include "kmchev/rootsys.hpp"
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace kmchev {

// Plain f-monomial f_{letters[0]} f_{letters[1]} ... v_lambda; letters[0]
// is the outermost (last applied) factor.
struct Monomial {
  std::vector<int> letters;
  auto operator<=>(const Monomial&) const = default;
};

// Divided-power monomial factor (simple index, power >= 1).
struct DividedFactor {
  int i;
  long m;
};
using DividedMonomial = std::vector<DividedFactor>;

struct BuildOptions {
  long max_total_dim = 200000;
};

// One weight space of the truncation: the quotient basis is a greedily
// chosen set of plain monomials with invertible contravariant Gram
// submatrix; all action matrices are stored both over that plain basis and
// rebased to the integral (divided-power lattice) basis.
struct WeightSpace {
  KVec k;
  long dim = 0;
  std::vector<Monomial> basis;
  // provenance of each basis monomial: (first letter, parent basis index)
  std::vector<std::pair<int, size_t>> parent;
  QMat gram;
  QMat gram_inv;
  std::vector<QMat> f_plain; // per i: this weight -> k + e_i (filled by child build)
  std::vector<QMat> e_plain; // per i: this weight -> k - e_i
  QMat zbasis;               // columns: integral basis over the plain basis
  QMat zbasis_inv;
  std::vector<QMat> f_int;
  std::vector<QMat> e_int;
};

class TruncatedModule {
public:
  // Builds all weight spaces of depth <= d for dominant integral lambda.
  static std::shared_ptr<const TruncatedModule> build(const Gcm& A, IVec lambda, long d,
                                                      BuildOptions opts = {});

  const Gcm& gcm() const { return A_; }
  const IVec& lambda() const { return lambda_; }
  long depth_bound() const { return d_; }
  long total_dim() const { return total_dim_; }

  // Multiplicity of the weight at depth vector k; DepthOutOfRange beyond
  // the truncation.
  long mult(const KVec& k) const;

  // dim lookup that treats negative coordinates as empty and refuses to
  // answer beyond the truncation
  long dim_at(const KVec& k) const;

  const WeightSpace* space(const KVec& k) const; // nullptr when dim 0
  const std::map<KVec, WeightSpace>& spaces() const { return spaces_; }

  // Exact action in integral-basis coordinates. e_i of anything at k with
  // k_i = 0 is zero; f_i beyond the depth bound always raises
  // TruncationOverflow.
  QVec e_action(int i, const KVec& k, const QVec& v) const;
  QVec f_action(int i, const KVec& k, const QVec& v) const;

  // Integral basis of the weight space over the plain-monomial quotient
  // basis (columns of the returned matrix), with the monomial labels.
  struct ZBasis {
    std::vector<Monomial> plain_basis;
    QMat columns;
  };
  ZBasis zbasis(const KVec& k) const;

  std::vector<DividedMonomial> divided_monomials(const KVec& k) const;
  // Coordinates of a divided-power monomial over the plain quotient basis.
  QVec divided_monomial_coords(const DividedMonomial& m) const;

private:
  TruncatedModule(Gcm A, IVec lambda, long d) : A_(std::move(A)), lambda_(std::move(lambda)), d_(d) {}
  void build_all(const BuildOptions& opts);
  void build_weight(const KVec& k, const BuildOptions& opts);

  Gcm A_;
  IVec lambda_;
  long d_;
  long total_dim_ = 0;
  std::map<KVec, WeightSpace> spaces_;
};

using ModulePtr = std::shared_ptr<const TruncatedModule>;

// Finite stand-in for the universal module: several truncations over one
// GCM with a common depth bound.
class ModuleCollection {
public:
  ModuleCollection(std::vector<ModulePtr> mods);
  const std::vector<ModulePtr>& modules() const { return mods_; }
  const Gcm& gcm() const { return mods_.front()->gcm(); }
  long depth_bound() const { return mods_.front()->depth_bound(); }

private:
  std::vector<ModulePtr> mods_;
};

// True when, for every simple index, some pair of nonzero weight spaces
// within the truncation differs by that simple root.
bool check_faithful_weight_lattice(const TruncatedModule& M);
bool check_faithful_weight_lattice(const ModuleCollection& C);

} // namespace kmchev
