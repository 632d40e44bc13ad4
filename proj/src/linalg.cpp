#include "kmchev/linalg.hpp"
#include "kmchev/errors.hpp"

namespace kmchev {

QMat QMat::identity(size_t n) {
  QMat m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

QMat QMat::operator*(const QMat& o) const {
  if (cols_ != o.rows_) fail(ErrorCode::Internal, "matrix product shape mismatch");
  QMat r(rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Rat& x = at(i, k);
      if (x == 0) continue;
      for (size_t j = 0; j < o.cols_; ++j)
        if (o.at(k, j) != 0) r.at(i, j) += x * o.at(k, j);
    }
  return r;
}

QVec QMat::operator*(const QVec& v) const {
  if (cols_ != v.size()) fail(ErrorCode::Internal, "matrix-vector shape mismatch");
  QVec r(rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      if (at(i, j) != 0 && v[j] != 0) r[i] += at(i, j) * v[j];
  return r;
}

QMat QMat::operator+(const QMat& o) const {
  QMat r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

QMat QMat::operator-(const QMat& o) const {
  QMat r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

QMat QMat::scaled(const Rat& c) const {
  QMat r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
  return r;
}

QMat QMat::transposed() const {
  QMat r(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

bool QMat::is_zero() const {
  for (const Rat& x : a_)
    if (x != 0) return false;
  return true;
}

bool QMat::is_integer() const {
  for (const Rat& x : a_)
    if (x.get_den() != 1) return false;
  return true;
}

bool QMat::is_identity() const {
  if (rows_ != cols_) return false;
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      if (at(i, j) != ((i == j) ? 1 : 0)) return false;
  return true;
}

size_t QMat::rank() const {
  QMat w = *this;
  size_t r = 0;
  for (size_t col = 0; col < cols_ && r < rows_; ++col) {
    size_t piv = r;
    while (piv < rows_ && w.at(piv, col) == 0) ++piv;
    if (piv == rows_) continue;
    if (piv != r)
      for (size_t j = 0; j < cols_; ++j) std::swap(w.at(piv, j), w.at(r, j));
    Rat inv = 1 / w.at(r, col);
    for (size_t j = col; j < cols_; ++j) w.at(r, j) *= inv;
    for (size_t i = 0; i < rows_; ++i) {
      if (i == r || w.at(i, col) == 0) continue;
      Rat f = w.at(i, col);
      for (size_t j = col; j < cols_; ++j) w.at(i, j) -= f * w.at(r, j);
    }
    ++r;
  }
  return r;
}

Rat QMat::det() const {
  if (rows_ != cols_) fail(ErrorCode::Internal, "determinant of non-square matrix");
  QMat w = *this;
  Rat d(1);
  for (size_t col = 0; col < cols_; ++col) {
    size_t piv = col;
    while (piv < rows_ && w.at(piv, col) == 0) ++piv;
    if (piv == rows_) return Rat(0);
    if (piv != col) {
      for (size_t j = 0; j < cols_; ++j) std::swap(w.at(piv, j), w.at(col, j));
      d = -d;
    }
    d *= w.at(col, col);
    Rat inv = 1 / w.at(col, col);
    for (size_t i = col + 1; i < rows_; ++i) {
      if (w.at(i, col) == 0) continue;
      Rat f = w.at(i, col) * inv;
      for (size_t j = col; j < cols_; ++j) w.at(i, j) -= f * w.at(col, j);
    }
  }
  return d;
}

QVec QMat::solve(const QVec& b) const {
  if (rows_ != cols_ || b.size() != rows_)
    fail(ErrorCode::Internal, "solve shape mismatch");
  size_t n = rows_;
  QMat w = *this;
  QVec rhs = b;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && w.at(piv, col) == 0) ++piv;
    if (piv == n) fail(ErrorCode::Internal, "singular system");
    if (piv != col) {
      for (size_t j = 0; j < n; ++j) std::swap(w.at(piv, j), w.at(col, j));
      std::swap(rhs[piv], rhs[col]);
    }
    Rat inv = 1 / w.at(col, col);
    for (size_t j = col; j < n; ++j) w.at(col, j) *= inv;
    rhs[col] *= inv;
    for (size_t i = 0; i < n; ++i) {
      if (i == col || w.at(i, col) == 0) continue;
      Rat f = w.at(i, col);
      for (size_t j = col; j < n; ++j) w.at(i, j) -= f * w.at(col, j);
      rhs[i] -= f * rhs[col];
    }
  }
  return rhs;
}

QMat QMat::inverse() const {
  if (rows_ != cols_) fail(ErrorCode::Internal, "inverse of non-square matrix");
  size_t n = rows_;
  QMat w = *this;
  QMat inv = QMat::identity(n);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && w.at(piv, col) == 0) ++piv;
    if (piv == n) fail(ErrorCode::Internal, "singular matrix");
    if (piv != col)
      for (size_t j = 0; j < n; ++j) {
        std::swap(w.at(piv, j), w.at(col, j));
        std::swap(inv.at(piv, j), inv.at(col, j));
      }
    Rat s = 1 / w.at(col, col);
    for (size_t j = 0; j < n; ++j) {
      w.at(col, j) *= s;
      inv.at(col, j) *= s;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == col || w.at(i, col) == 0) continue;
      Rat f = w.at(i, col);
      for (size_t j = 0; j < n; ++j) {
        w.at(i, j) -= f * w.at(col, j);
        inv.at(i, j) -= f * inv.at(col, j);
      }
    }
  }
  return inv;
}

QVec operator*(const Rat& c, const QVec& v) {
  QVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
  return r;
}

QVec operator+(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

bool is_zero(const QVec& v) {
  for (const Rat& x : v)
    if (x != 0) return false;
  return true;
}

Int bareiss_det(const std::vector<IVec>& m) {
  size_t n = m.size();
  if (n == 0) return Int(1);
  std::vector<IVec> w = m;
  Int prev(1);
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (w[k][k] == 0) {
      size_t piv = k + 1;
      while (piv < n && w[piv][k] == 0) ++piv;
      if (piv == n) return Int(0);
      std::swap(w[piv], w[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        Int t = w[i][j] * w[k][k] - w[i][k] * w[k][j];
        w[i][j] = t / prev; // exact by Bareiss
      }
    prev = w[k][k];
  }
  return sign > 0 ? w[n - 1][n - 1] : Int(-w[n - 1][n - 1]);
}

std::vector<IVec> hermite_column_basis(std::vector<IVec> m) {
  if (m.empty()) return {};
  size_t nrows = m.size();
  size_t ncols = m[0].size();
  // work column-wise
  std::vector<IVec> cols(ncols, IVec(nrows));
  for (size_t i = 0; i < nrows; ++i)
    for (size_t j = 0; j < ncols; ++j) cols[j][i] = m[i][j];

  size_t lead = 0;
  for (size_t row = 0; row < nrows && lead < cols.size(); ++row) {
    // gcd-combine columns lead..end on this row
    bool any = false;
    for (size_t j = lead; j < cols.size(); ++j)
      if (cols[j][row] != 0) { any = true; break; }
    if (!any) continue;
    // eliminate by repeated division: keep the column with the smallest
    // nonzero |entry| at `lead`, reduce the others
    while (true) {
      size_t best = cols.size();
      for (size_t j = lead; j < cols.size(); ++j) {
        if (cols[j][row] == 0) continue;
        if (best == cols.size() ||
            mpz_cmpabs(cols[j][row].get_mpz_t(), cols[best][row].get_mpz_t()) < 0)
          best = j;
      }
      std::swap(cols[lead], cols[best]);
      bool done = true;
      for (size_t j = lead + 1; j < cols.size(); ++j) {
        if (cols[j][row] == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), cols[j][row].get_mpz_t(), cols[lead][row].get_mpz_t());
        for (size_t i = 0; i < nrows; ++i) cols[j][i] -= q * cols[lead][i];
        if (cols[j][row] != 0) done = false;
      }
      if (done) break;
    }
    if (cols[lead][row] < 0)
      for (size_t i = 0; i < nrows; ++i) cols[lead][i] = -cols[lead][i];
    // reduce earlier pivot columns' entries on this row into [0, pivot)
    for (size_t j = 0; j < lead; ++j) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), cols[j][row].get_mpz_t(), cols[lead][row].get_mpz_t());
      if (q != 0)
        for (size_t i = 0; i < nrows; ++i) cols[j][i] -= q * cols[lead][i];
    }
    ++lead;
  }
  cols.resize(lead);
  return cols;
}

} // namespace kmchev
