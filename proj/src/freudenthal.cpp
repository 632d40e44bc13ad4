#include "kmchev/freudenthal.hpp"
#include "kmchev/errors.hpp"

namespace kmchev {

namespace {

bool is_zero_k(const KVec& k) {
  for (long x : k)
    if (x != 0) return false;
  return true;
}

// all componentwise 0 <= b < k... enumeration helper: next sub-tuple of k
bool next_subtuple(KVec& b, const KVec& k) {
  for (size_t i = 0; i < b.size(); ++i) {
    if (b[i] < k[i]) {
      ++b[i];
      for (size_t j = 0; j < i; ++j) b[j] = 0;
      return true;
    }
  }
  return false;
}

} // namespace

FreudenthalOracle::FreudenthalOracle(const Gcm& A, IVec lambda)
    : A_(A), lambda_(std::move(lambda)), d_(symmetrize(A)) {
  if (lambda_.size() != A_.rank())
    fail(ErrorCode::UsageError, "lambda rank mismatch");
  for (const Int& l : lambda_)
    if (l < 0) fail(ErrorCode::NotDominant, "lambda must be dominant integral");
}

Rat FreudenthalOracle::form_rr(const KVec& x, const KVec& y) const {
  Rat s(0);
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (size_t j = 0; j < y.size(); ++j)
      if (y[j] != 0) s += Rat(x[i]) * Rat(y[j]) * d_[i] * Rat(A_.a(i, j));
  }
  return s;
}

Rat FreudenthalOracle::form_lr(const KVec& x) const {
  Rat s(0);
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) s += Rat(x[i]) * d_[i] * Rat(lambda_[i]);
  return s;
}

Rat FreudenthalOracle::form_rhor(const KVec& x) const {
  Rat s(0);
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) s += Rat(x[i]) * d_[i];
  return s;
}

// Peterson recursion: (beta | beta - 2 rho) c_beta =
//   sum_{beta' + beta'' = beta} (beta' | beta'') c_{beta'} c_{beta''},
// where c_beta = sum_{n >= 1, beta/n integral} root_mult(beta/n) / n.
Rat FreudenthalOracle::peterson_c(const KVec& beta) {
  auto it = c_memo_.find(beta);
  if (it != c_memo_.end()) return it->second;
  long ht = 0;
  for (long x : beta) ht += x;
  if (ht <= 0) fail(ErrorCode::Internal, "peterson_c on nonpositive vector");
  Rat res;
  if (ht == 1) {
    res = 1; // simple roots
  } else {
    Rat rhs(0);
    KVec b1(beta.size(), 0);
    while (next_subtuple(b1, beta)) {
      if (b1 == beta) continue;
      KVec b2(beta.size());
      bool zero2 = true;
      for (size_t i = 0; i < beta.size(); ++i) {
        b2[i] = beta[i] - b1[i];
        if (b2[i] != 0) zero2 = false;
      }
      if (zero2) continue;
      Rat c1 = peterson_c(b1);
      if (c1 == 0) continue;
      Rat c2 = peterson_c(b2);
      if (c2 == 0) continue;
      rhs += form_rr(b1, b2) * c1 * c2;
    }
    Rat denom = form_rr(beta, beta) - 2 * form_rhor(beta);
    if (denom == 0) {
      if (rhs != 0) fail(ErrorCode::Internal, "Peterson recursion hit 0 = nonzero");
      // 0 = 0 leaves c undetermined. Imaginary roots have strictly negative
      // denominator ((beta|beta) <= 0 and (rho|beta) > 0), so beta is
      // either a real root (multiplicity 1) or not a root at all; decide by
      // the Weyl-orbit enumeration and rebuild c from the divisor sum.
      Int m = is_real_root(beta) ? 1 : 0;
      rootmult_memo_.emplace(beta, m);
      res = Rat(m);
      for (long n = 2; n <= ht; ++n) {
        KVec div(beta.size());
        bool ok = true;
        for (size_t i = 0; i < beta.size(); ++i) {
          if (beta[i] % n != 0) { ok = false; break; }
          div[i] = beta[i] / n;
        }
        if (ok) res += Rat(root_mult(div)) / Rat(n);
      }
    } else {
      res = rhs / denom;
    }
  }
  c_memo_.emplace(beta, res);
  return res;
}

bool FreudenthalOracle::is_real_root(const KVec& beta) {
  long h = 0;
  for (long x : beta) h += x;
  if (h > reals_height_) {
    reals_.clear();
    for (const RealRoot& r : real_roots_up_to_height(A_, h)) {
      KVec k(r.coords.size());
      for (size_t i = 0; i < k.size(); ++i) k[i] = r.coords[i].get_si();
      reals_.insert(std::move(k));
    }
    reals_height_ = h;
  }
  return reals_.count(beta) > 0;
}

Int FreudenthalOracle::root_mult(const KVec& beta) {
  auto it = rootmult_memo_.find(beta);
  if (it != rootmult_memo_.end()) return it->second;
  Rat c = peterson_c(beta);
  // strip the divisor sum: mult(beta) = c_beta - sum_{n>=2} mult(beta/n)/n
  long ht = 0;
  for (long x : beta) ht += x;
  for (long n = 2; n <= ht; ++n) {
    KVec div(beta.size());
    bool ok = true;
    for (size_t i = 0; i < beta.size(); ++i) {
      if (beta[i] % n != 0) { ok = false; break; }
      div[i] = beta[i] / n;
    }
    if (!ok) continue;
    c -= Rat(root_mult(div)) / Rat(n);
  }
  if (!is_integer(c) || c < 0)
    fail(ErrorCode::Internal, "Peterson produced a non-integral root multiplicity");
  Int m = c.get_num();
  rootmult_memo_.emplace(beta, m);
  return m;
}

Int FreudenthalOracle::mult(const KVec& k) {
  if (k.size() != A_.rank()) fail(ErrorCode::UsageError, "depth vector rank mismatch");
  for (long x : k)
    if (x < 0) return Int(0);
  if (is_zero_k(k)) return Int(1);
  auto it = mult_memo_.find(k);
  if (it != mult_memo_.end()) return it->second;

  // 2(lambda + rho | beta) - (beta | beta), beta = sum k_i alpha_i
  Rat denom = 2 * form_lr(k) + 2 * form_rhor(k) - form_rr(k, k);

  Rat rhs(0);
  // sum over positive roots alpha with j*alpha <= k componentwise
  KVec alpha(k.size(), 0);
  while (next_subtuple(alpha, k)) {
    Int malpha = root_mult(alpha);
    if (malpha == 0) continue;
    for (long j = 1;; ++j) {
      KVec up(k.size());
      bool ok = true;
      for (size_t i = 0; i < k.size(); ++i) {
        up[i] = k[i] - j * alpha[i];
        if (up[i] < 0) { ok = false; break; }
      }
      if (!ok) break;
      Int m = mult(up);
      if (m != 0) {
        // (lambda - up + j*alpha ... weight mu + j alpha paired with alpha
        Rat term = form_lr(alpha) - form_rr(up, alpha);
        rhs += Rat(malpha) * Rat(m) * term;
      }
    }
  }
  rhs *= 2;

  Int result;
  if (denom == 0) {
    if (rhs != 0) fail(ErrorCode::Internal, "Freudenthal recursion hit 0 = nonzero");
    result = 0;
  } else {
    Rat m = rhs / denom;
    if (!is_integer(m) || m < 0)
      fail(ErrorCode::Internal, "Freudenthal produced a non-integral multiplicity");
    result = m.get_num();
  }
  mult_memo_.emplace(k, result);
  return result;
}

} // namespace kmchev
