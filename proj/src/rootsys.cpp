#include "kmchev/rootsys.hpp"
#include "kmchev/errors.hpp"
#include <algorithm>
#include <map>
#include <queue>

namespace kmchev {

Int height(const RootCoords& r) {
  Int h(0);
  for (const Int& c : r) h += c;
  return h;
}

bool all_nonneg(const RootCoords& r) {
  return std::all_of(r.begin(), r.end(), [](const Int& c) { return c >= 0; });
}

bool all_nonpos(const RootCoords& r) {
  return std::all_of(r.begin(), r.end(), [](const Int& c) { return c <= 0; });
}

RootCoords simple_root(size_t rank, int i) {
  RootCoords r(rank, Int(0));
  r[i] = 1;
  return r;
}

Int root_pairing(const Gcm& A, const RootCoords& alpha, int i) {
  Int p(0);
  for (size_t j = 0; j < A.rank(); ++j)
    if (alpha[j] != 0) p += A.a(i, j) * alpha[j];
  return p;
}

RootCoords reflect(const Gcm& A, int i, const RootCoords& alpha) {
  RootCoords r = alpha;
  r[i] -= root_pairing(A, alpha, i);
  return r;
}

int root_order_cmp(const RootCoords& a, const RootCoords& b) {
  Int ha = height(a), hb = height(b);
  if (ha != hb) return ha < hb ? -1 : 1;
  for (size_t j = 0; j < a.size(); ++j)
    if (a[j] != b[j]) return a[j] < b[j] ? -1 : 1;
  return 0;
}

std::vector<RealRoot> real_roots_up_to_height(const Gcm& A, long h) {
  if (h < 1) return {};
  size_t n = A.rank();
  // reflections can dip above the bound and come back; prune at h plus the
  // spec'd safety margin
  Int maxa(0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) maxa = std::max(maxa, Int(abs(A.a(i, j))));
  Int cutoff = Int(h) + maxa * h;

  std::map<RootCoords, Witness> seen;
  std::queue<RootCoords> frontier;
  for (size_t i = 0; i < n; ++i) {
    RootCoords a = simple_root(n, static_cast<int>(i));
    seen.emplace(a, Witness{{}, static_cast<int>(i)});
    frontier.push(a);
  }
  while (!frontier.empty()) {
    RootCoords a = frontier.front();
    frontier.pop();
    const Witness& wa = seen.at(a);
    for (size_t i = 0; i < n; ++i) {
      RootCoords b = reflect(A, static_cast<int>(i), a);
      if (!all_nonneg(b)) continue; // only -alpha_i can appear; drop it
      if (height(b) > cutoff) continue;
      if (seen.count(b)) continue;
      Witness wb;
      wb.word.reserve(wa.word.size() + 1);
      wb.word.push_back(static_cast<int>(i));
      wb.word.insert(wb.word.end(), wa.word.begin(), wa.word.end());
      wb.simple = wa.simple;
      seen.emplace(b, std::move(wb));
      frontier.push(b);
    }
  }
  std::vector<RealRoot> out;
  for (auto& [coords, wit] : seen)
    if (height(coords) <= h) out.push_back({coords, wit});
  std::sort(out.begin(), out.end(), [](const RealRoot& x, const RealRoot& y) {
    return root_order_cmp(x.coords, y.coords) < 0;
  });
  return out;
}

IVec coroot_coords(const Gcm& A, const Witness& w) {
  size_t n = A.rank();
  IVec cv(n, Int(0));
  cv[w.simple] = 1;
  // alpha^vee = w_{j1} ... w_{jm} (alpha_i^vee), rightmost reflection first
  for (auto it = w.word.rbegin(); it != w.word.rend(); ++it) {
    int j = *it;
    Int p(0);
    for (size_t k = 0; k < n; ++k)
      if (cv[k] != 0) p += A.a(j, k) * cv[k];
    cv[j] -= p;
  }
  return cv;
}

Int depth(const ModuleWeight& mu) {
  Int d(0);
  for (long x : mu.k) d += x;
  return d;
}

Int pairing(const Gcm& A, const ModuleWeight& mu, int i) {
  Int p = mu.lambda[i];
  for (size_t j = 0; j < A.rank(); ++j)
    if (mu.k[j] != 0) p -= A.a(i, j) * mu.k[j];
  return p;
}

ModuleWeight weyl_reflect(const Gcm& A, int i, const ModuleWeight& mu) {
  Int p = pairing(A, mu, i);
  if (!p.fits_slong_p()) fail(ErrorCode::Internal, "pairing exceeds machine range");
  ModuleWeight r = mu;
  r.k[i] += p.get_si();
  return r;
}

ModuleWeight weyl_apply(const Gcm& A, const std::vector<int>& word, ModuleWeight mu) {
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    mu = weyl_reflect(A, *it, mu);
  return mu;
}

Int coroot_pairing(const Gcm& A, const ModuleWeight& mu, const Witness& w) {
  IVec cv = coroot_coords(A, w);
  Int p(0);
  for (size_t i = 0; i < A.rank(); ++i)
    if (cv[i] != 0) p += cv[i] * pairing(A, mu, static_cast<int>(i));
  return p;
}

QMat integral_h_lattice(const Gcm& A, LatticeTag L) {
  size_t n = A.rank();
  if (determinant(A) == 0)
    fail(ErrorCode::DegenerateCartan, "h-lattice computation needs det A != 0");
  if (L == LatticeTag::WeightLattice) return QMat::identity(n);
  // mu(h) in Z for all mu in Q means A^T x in Z^n, so the lattice is
  // spanned by the columns of A^{-T}
  QMat at(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) at.at(i, j) = Rat(A.a(j, i));
  return at.inverse();
}

} // namespace kmchev
