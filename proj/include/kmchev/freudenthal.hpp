#pragma once
#include "kmchev/cartan.hpp"
#include "kmchev/rootsys.hpp"
#include <map>
#include <set>

namespace kmchev {

// Weight-multiplicity oracle independent of the module builder: root
// multiplicities come from the Peterson recursion and weight multiplicities
// from the Freudenthal recursion, all in exact rationals. Nothing here
// touches Gram matrices or monomial bases.
class FreudenthalOracle {
public:
  FreudenthalOracle(const Gcm& A, IVec lambda);

  // Multiplicity of lambda - sum k_i alpha_i in the irreducible module.
  Int mult(const KVec& k);

  // Root multiplicity of the positive-lattice vector beta (0 for non-roots).
  Int root_mult(const KVec& beta);

private:
  Rat form_rr(const KVec& x, const KVec& y) const;  // (x|y), root x root
  Rat form_lr(const KVec& x) const;                 // (lambda|x)
  Rat form_rhor(const KVec& x) const;               // (rho|x)
  Rat peterson_c(const KVec& beta);
  bool is_real_root(const KVec& beta);

  const Gcm A_;
  IVec lambda_;
  QVec d_; // symmetrizer
  std::map<KVec, Int> mult_memo_;
  std::map<KVec, Int> rootmult_memo_;
  std::map<KVec, Rat> c_memo_;
  std::set<KVec> reals_;
  long reals_height_ = 0;
};

} // namespace kmchev
