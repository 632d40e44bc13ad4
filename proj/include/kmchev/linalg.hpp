#pragma once
#include "kmchev/rational.hpp"
#include <cstddef>
#include <vector>

namespace kmchev {

// Dense exact-rational matrix. Weight-space dimensions stay small, so a
// plain row-major layout is all we need.
class QMat {
public:
  QMat() = default;
  QMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static QMat identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  Rat& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const Rat& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  bool operator==(const QMat& o) const = default;

  QMat operator*(const QMat& o) const;
  QVec operator*(const QVec& v) const;
  QMat operator+(const QMat& o) const;
  QMat operator-(const QMat& o) const;
  QMat scaled(const Rat& c) const;
  QMat transposed() const;

  bool is_zero() const;
  bool is_integer() const;
  bool is_identity() const;

  size_t rank() const;
  Rat det() const;
  // Solves A x = b for square nonsingular A; throws Internal otherwise.
  QVec solve(const QVec& b) const;
  QMat inverse() const;

private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Rat> a_;
};

QVec operator*(const Rat& c, const QVec& v);
QVec operator+(const QVec& a, const QVec& b);
bool is_zero(const QVec& v);

// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
Int bareiss_det(const std::vector<IVec>& m);

// Column-style Hermite reduction: returns a basis (as columns) of the
// integer column span of m, in column echelon form with positive pivots,
// pivot rows strictly increasing, and the pivot-row entries of earlier
// columns reduced into [0, pivot). Zero columns are dropped.
std::vector<IVec> hermite_column_basis(std::vector<IVec> m);

} // namespace kmchev
