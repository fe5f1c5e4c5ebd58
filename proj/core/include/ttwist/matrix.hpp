#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttwist/rational.hpp"

namespace ttwist {

using Vector = std::vector<Rational>;

inline bool is_zero(const Vector& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

/// Dense rational matrix, row-major. Dimensions are fixed at construction.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(size_t rows, size_t cols, std::initializer_list<long> row_major);

  static Matrix identity(size_t n);
  static Matrix from_columns(size_t rows, const std::vector<Vector>& columns);
  static Matrix diagonal(const std::vector<Rational>& d);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  /// Bounds-checked access; throws std::out_of_range.
  const Rational& at(size_t r, size_t c) const;
  Rational& at(size_t r, size_t c);
  const Rational& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  Rational& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }

  Vector column(size_t c) const;
  Vector row(size_t r) const;
  std::vector<Vector> columns() const;
  void set_column(size_t c, const Vector& v);

  Matrix transpose() const;
  Matrix select_columns(std::span<const size_t> idx) const;
  Matrix select_rows(std::span<const size_t> idx) const;
  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(size_t r0, size_t c0, size_t nr, size_t nc) const;
  void set_block(size_t r0, size_t c0, const Matrix& b);

  bool is_zero() const;
  size_t nonzeros() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string str() const;

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& v);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Rational& s, const Matrix& a);

/// [a | b]; row counts must agree.
Matrix hstack(const Matrix& a, const Matrix& b);
/// [a ; b]; column counts must agree.
Matrix vstack(const Matrix& a, const Matrix& b);
/// Block diagonal matrix.
Matrix block_diagonal(const std::vector<Matrix>& blocks);

/// Reduced row echelon form under the fixed pivot rule: columns are scanned
/// left to right, and in each column the first nonzero row at or below the
/// current row (top-down) becomes the pivot.
struct Echelon {
  Matrix rref;
  std::vector<size_t> pivot_columns;
  size_t rank() const { return pivot_columns.size(); }
};
Echelon row_reduce(const Matrix& m);

struct ColumnSpace {
  size_t rank = 0;
  std::vector<Vector> kernel_basis;
  std::vector<Vector> image_basis;
  std::vector<size_t> pivot_columns;
};

/// Rank, kernel, image and pivot columns. The kernel basis has one vector per
/// free column (free coordinate 1, other free coordinates 0); the image basis
/// is the set of original columns at pivot positions.
ColumnSpace column_space_analysis(const Matrix& m);

size_t rank(const Matrix& m);
/// Kernel basis as columns of a cols(m) x nullity matrix.
Matrix kernel(const Matrix& m);
/// Exact determinant; throws InputError if m is not square.
Rational determinant(const Matrix& m);
/// One solution of m x = b with free coordinates set to 0, or nullopt.
/// Throws InputError when b has the wrong length.
std::optional<Vector> solve(const Matrix& m, const Vector& b);
/// Solves m X = B column by column; nullopt if any column is unsolvable.
std::optional<Matrix> solve(const Matrix& m, const Matrix& b);
std::optional<Matrix> inverse(const Matrix& m);

// Subspaces are represented by matrices whose columns span them.

/// Linearly independent columns spanning the same space (pivot columns).
Matrix column_basis(const Matrix& span);
/// Basis of span(a) ∩ span(b).
Matrix intersect(const Matrix& a, const Matrix& b, size_t ambient);
/// Columns of `z` completing a basis of span(den) to one of span(den)+span(z).
/// These represent a basis of span(z)/span(den) when span(den) ⊆ span(z).
Matrix complement_columns(const Matrix& z, const Matrix& den, size_t ambient);
/// Rows whose common kernel is exactly span(s) (an annihilator basis).
Matrix annihilator(const Matrix& s, size_t ambient);
/// Whether every column of a lies in span(b).
bool contained_in(const Matrix& a, const Matrix& b, size_t ambient);

/// Zero matrix helper with explicit ambient when there are no columns.
inline Matrix empty_columns(size_t ambient) { return Matrix(ambient, 0); }

}  // namespace ttwist
