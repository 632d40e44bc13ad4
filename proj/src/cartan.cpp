#include "kmchev/cartan.hpp"
#include "kmchev/errors.hpp"
#include <algorithm>

namespace kmchev {

Gcm Gcm::validate(const std::vector<IVec>& entries) {
  size_t n = entries.size();
  if (n == 0) fail(ErrorCode::UsageError, "empty matrix");
  for (const auto& row : entries)
    if (row.size() != n) fail(ErrorCode::UsageError, "matrix is not square");
  for (size_t i = 0; i < n; ++i) {
    if (entries[i][i] != 2)
      fail(ErrorCode::DiagonalNotTwo,
           "entry (" + std::to_string(i + 1) + "," + std::to_string(i + 1) + ") is " +
               entries[i][i].get_str() + ", expected 2");
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (entries[i][j] > 0)
        fail(ErrorCode::PositiveOffDiagonal,
             "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is positive");
      if ((entries[i][j] == 0) != (entries[j][i] == 0))
        fail(ErrorCode::ZeroSymmetryViolated,
             "entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                 ") and the transpose position do not vanish together");
    }
  }
  return Gcm(entries);
}

bool Gcm::indecomposable() const {
  std::vector<char> seen(n_, 0);
  std::vector<size_t> stack{0};
  seen[0] = 1;
  size_t count = 1;
  while (!stack.empty()) {
    size_t v = stack.back();
    stack.pop_back();
    for (size_t j = 0; j < n_; ++j)
      if (j != v && !seen[j] && a_[v][j] != 0) {
        seen[j] = 1;
        ++count;
        stack.push_back(j);
      }
  }
  return count == n_;
}

QVec symmetrize(const Gcm& A) {
  size_t n = A.rank();
  QVec d(n, Rat(0));
  // propagate d_i a_ij = d_j a_ji along the diagram graph, component by
  // component, then verify every relation
  for (size_t start = 0; start < n; ++start) {
    if (d[start] != 0) continue;
    d[start] = 1;
    std::vector<size_t> stack{start};
    while (!stack.empty()) {
      size_t v = stack.back();
      stack.pop_back();
      for (size_t j = 0; j < n; ++j) {
        if (j == v || A.a(v, j) == 0) continue;
        Rat required = d[v] * make_rat(A.a(v, j), A.a(j, v));
        if (d[j] == 0) {
          d[j] = required;
          stack.push_back(j);
        }
      }
    }
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (d[i] * A.a(i, j) != d[j] * A.a(j, i))
        fail(ErrorCode::NotSymmetrizable, "no positive diagonal D makes DA symmetric");
  Rat mn = d[0];
  for (const Rat& x : d) mn = std::min(mn, x);
  for (Rat& x : d) x /= mn;
  return d;
}

namespace {

QMat symmetrized_matrix(const Gcm& A, const QVec& d) {
  size_t n = A.rank();
  QMat s(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) s.at(i, j) = d[i] * Rat(A.a(i, j));
  return s;
}

// All leading principal minors positive, by recording pivots of symmetric
// elimination without row exchanges.
bool positive_definite(QMat s) {
  size_t n = s.rows();
  for (size_t k = 0; k < n; ++k) {
    if (s.at(k, k) <= 0) return false;
    Rat inv = 1 / s.at(k, k);
    for (size_t i = k + 1; i < n; ++i) {
      if (s.at(i, k) == 0) continue;
      Rat f = s.at(i, k) * inv;
      for (size_t j = k; j < n; ++j) s.at(i, j) -= f * s.at(k, j);
    }
  }
  return true;
}

// Exact PSD test: a zero pivot forces a zero row, otherwise recurse on the
// Schur complement.
bool positive_semidefinite(QMat s) {
  size_t n = s.rows();
  std::vector<char> active(n, 1);
  for (size_t k = 0; k < n; ++k) {
    if (!active[k]) continue;
    if (s.at(k, k) < 0) return false;
    if (s.at(k, k) == 0) {
      for (size_t j = 0; j < n; ++j)
        if (active[j] && j != k && s.at(k, j) != 0) return false;
      active[k] = 0;
      continue;
    }
    Rat inv = 1 / s.at(k, k);
    for (size_t i = k + 1; i < n; ++i) {
      if (!active[i] || s.at(i, k) == 0) continue;
      Rat f = s.at(i, k) * inv;
      for (size_t j = k; j < n; ++j)
        if (active[j]) s.at(i, j) -= f * s.at(k, j);
    }
    active[k] = 0;
  }
  return true;
}

std::vector<IVec> principal_submatrix(const Gcm& A, const std::vector<size_t>& idx) {
  std::vector<IVec> sub(idx.size(), IVec(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) sub[i][j] = A.a(idx[i], idx[j]);
  return sub;
}

std::vector<std::vector<size_t>> components(const Gcm& A, const std::vector<size_t>& idx) {
  std::vector<std::vector<size_t>> comps;
  std::vector<char> seen(idx.size(), 0);
  for (size_t s = 0; s < idx.size(); ++s) {
    if (seen[s]) continue;
    std::vector<size_t> comp;
    std::vector<size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      size_t v = stack.back();
      stack.pop_back();
      comp.push_back(idx[v]);
      for (size_t j = 0; j < idx.size(); ++j)
        if (!seen[j] && A.a(idx[v], idx[j]) != 0 && v != j) {
          seen[j] = 1;
          stack.push_back(j);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

bool finite_or_affine(const Gcm& sub) {
  QVec d = symmetrize(sub);
  QMat s = symmetrized_matrix(sub, d);
  return positive_definite(s) || positive_semidefinite(s);
}

} // namespace

Classification classify(const Gcm& A) {
  if (!A.indecomposable()) fail(ErrorCode::Decomposable, "matrix is decomposable");
  QVec d = symmetrize(A);
  QMat s = symmetrized_matrix(A, d);
  if (positive_definite(s)) return {CartanType::Finite, false};
  if (positive_semidefinite(s) && determinant(A) == 0) return {CartanType::Affine, false};
  // hyperbolic: every proper indecomposable principal submatrix is finite
  // or affine; it suffices to delete one vertex at a time since the
  // finite/affine property is hereditary under taking principal
  // submatrices (checked against brute-force enumeration in tests)
  bool hyp = true;
  size_t n = A.rank();
  for (size_t drop = 0; drop < n && hyp; ++drop) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < n; ++i)
      if (i != drop) idx.push_back(i);
    for (const auto& comp : components(A, idx)) {
      Gcm sub = Gcm::validate(principal_submatrix(A, comp));
      if (!finite_or_affine(sub)) {
        hyp = false;
        break;
      }
    }
  }
  return {CartanType::Indefinite, hyp};
}

Gcm y_diagram(long p, long q, long r) {
  if (p < 2 || q < 2 || r < 2)
    fail(ErrorCode::ArmTooShort, "Y(p,q,r) requires p,q,r >= 2");
  size_t n = static_cast<size_t>(p + q + r - 2);
  std::vector<IVec> a(n, IVec(n, Int(0)));
  for (size_t i = 0; i < n; ++i) a[i][i] = 2;
  auto join = [&](size_t i, size_t j) {
    a[i][j] = -1;
    a[j][i] = -1;
  };
  size_t next = 1;
  for (long arm : {p - 1, q - 1, r - 1}) {
    size_t prev = 0; // center
    for (long s = 0; s < arm; ++s) {
      join(prev, next);
      prev = next++;
    }
  }
  Gcm g = Gcm::validate(a);
  g.y_params = {{p, q, r}};
  return g;
}

Int determinant(const Gcm& A) { return bareiss_det(A.entries()); }

DetReport determinant_report(const Gcm& A) {
  DetReport rep;
  rep.det = determinant(A);
  if (A.y_params) {
    auto [p, q, r] = *A.y_params;
    rep.has_formula = true;
    rep.formula = Int(p) * q * r - Int(p) * q - Int(q) * r - Int(r) * p;
    rep.equal = rep.formula == rep.det;
    rep.equal_abs = abs(rep.formula) == abs(rep.det);
  }
  return rep;
}

std::optional<Int> lattice_index(const Gcm& A) {
  Int det = determinant(A);
  if (det == 0) return std::nullopt;
  return abs(det);
}

std::string classification_str(const Classification& c) {
  switch (c.type) {
    case CartanType::Finite: return "finite";
    case CartanType::Affine: return "affine";
    case CartanType::Indefinite: return "indefinite";
  }
  return "?";
}

} // namespace kmchev
