#include "ttwist/matrix.hpp"

#include <sstream>
#include <stdexcept>

#include "ttwist/errors.hpp"

namespace ttwist {

Matrix::Matrix(size_t rows, size_t cols, std::initializer_list<long> row_major)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (row_major.size() != rows * cols) throw InputError("initializer size does not match matrix shape");
  size_t i = 0;
  for (long v : row_major) data_[i++] = Rational(v);
}

Matrix Matrix::identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
  return m;
}

Matrix Matrix::from_columns(size_t rows, const std::vector<Vector>& columns) {
  Matrix m(rows, columns.size());
  for (size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw InputError("column length mismatch");
    for (size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Matrix Matrix::diagonal(const std::vector<Rational>& d) {
  Matrix m(d.size(), d.size());
  for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

const Rational& Matrix::at(size_t r, size_t c) const {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
  return data_[r * cols_ + c];
}

Rational& Matrix::at(size_t r, size_t c) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
  return data_[r * cols_ + c];
}

Vector Matrix::column(size_t c) const {
  if (c >= cols_) throw std::out_of_range("column index out of range");
  Vector v(rows_);
  for (size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vector Matrix::row(size_t r) const {
  if (r >= rows_) throw std::out_of_range("row index out of range");
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

std::vector<Vector> Matrix::columns() const {
  std::vector<Vector> out;
  out.reserve(cols_);
  for (size_t c = 0; c < cols_; ++c) out.push_back(column(c));
  return out;
}

void Matrix::set_column(size_t c, const Vector& v) {
  if (c >= cols_ || v.size() != rows_) throw InputError("set_column shape mismatch");
  for (size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::select_columns(std::span<const size_t> idx) const {
  Matrix m(rows_, idx.size());
  for (size_t k = 0; k < idx.size(); ++k)
    for (size_t r = 0; r < rows_; ++r) m(r, k) = at(r, idx[k]);
  return m;
}

Matrix Matrix::select_rows(std::span<const size_t> idx) const {
  Matrix m(idx.size(), cols_);
  for (size_t k = 0; k < idx.size(); ++k)
    for (size_t c = 0; c < cols_; ++c) m(k, c) = at(idx[k], c);
  return m;
}

Matrix Matrix::block(size_t r0, size_t c0, size_t nr, size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("block out of range");
  Matrix m(nr, nc);
  for (size_t r = 0; r < nr; ++r)
    for (size_t c = 0; c < nc; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
  return m;
}

void Matrix::set_block(size_t r0, size_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw std::out_of_range("block out of range");
  for (size_t r = 0; r < b.rows(); ++r)
    for (size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

size_t Matrix::nonzeros() const {
  size_t n = 0;
  for (const auto& x : data_) n += !x.is_zero();
  return n;
}

std::string Matrix::str() const {
  std::ostringstream os;
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << (*this)(r, c);
    if (r + 1 < rows_) os << " ; ";
  }
  return os.str();
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InputError("matrix product shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      const Rational& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (size_t j = 0; j < b.cols(); ++j)
        if (!b(k, j).is_zero()) out(i, j).add_mul(aik, b(k, j));
    }
  return out;
}

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols() != v.size()) throw InputError("matrix-vector shape mismatch");
  Vector out(a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k)
      if (!v[k].is_zero() && !a(i, k).is_zero()) out[i].add_mul(a(i, k), v[k]);
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("matrix sum shape mismatch");
  Matrix out = a;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("matrix difference shape mismatch");
  Matrix out = a;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  return out;
}

Matrix operator*(const Rational& s, const Matrix& a) {
  Matrix out = a;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out(i, j) *= s;
  return out;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw InputError("hstack row mismatch");
  Matrix out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw InputError("vstack column mismatch");
  Matrix out(a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  size_t r = 0, c = 0;
  for (const auto& b : blocks) r += b.rows(), c += b.cols();
  Matrix out(r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

namespace {

void swap_rows(Matrix& m, size_t a, size_t b) {
  if (a == b) return;
  for (size_t c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

// Gauss-Jordan elimination in place. With `reduced` the pivots are scaled to
// one and cleared above as well as below.
std::vector<size_t> eliminate(Matrix& m, bool reduced) {
  std::vector<size_t> pivots;
  size_t row = 0;
  std::vector<size_t> nz;
  for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    size_t p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    swap_rows(m, row, p);
    if (reduced) {
      Rational inv = m(row, col).inverse();
      for (size_t c = col; c < m.cols(); ++c)
        if (!m(row, c).is_zero()) m(row, c) *= inv;
    }
    nz.clear();
    for (size_t c = col; c < m.cols(); ++c)
      if (!m(row, c).is_zero()) nz.push_back(c);
    Rational pinv = reduced ? Rational(1) : m(row, col).inverse();
    for (size_t r = reduced ? 0 : row + 1; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      Rational f = m(r, col) * pinv;
      for (size_t c : nz) m(r, c).sub_mul(f, m(row, c));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

Echelon row_reduce(const Matrix& m) {
  Echelon e{m, {}};
  e.pivot_columns = eliminate(e.rref, true);
  return e;
}

ColumnSpace column_space_analysis(const Matrix& m) {
  Echelon e = row_reduce(m);
  ColumnSpace cs;
  cs.rank = e.rank();
  cs.pivot_columns = e.pivot_columns;
  std::vector<bool> is_pivot(m.cols(), false);
  for (size_t c : e.pivot_columns) is_pivot[c] = true;
  for (size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = Rational(1);
    for (size_t i = 0; i < e.pivot_columns.size(); ++i) v[e.pivot_columns[i]] = -e.rref(i, f);
    cs.kernel_basis.push_back(std::move(v));
  }
  for (size_t c : e.pivot_columns) cs.image_basis.push_back(m.column(c));
  return cs;
}

size_t rank(const Matrix& m) {
  Matrix w = m;
  return eliminate(w, false).size();
}

Matrix kernel(const Matrix& m) {
  return Matrix::from_columns(m.cols(), column_space_analysis(m).kernel_basis);
}

Rational determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("determinant of a non-square matrix");
  Matrix w = m;
  Rational det(1);
  size_t n = m.rows();
  for (size_t col = 0; col < n; ++col) {
    size_t p = col;
    while (p < n && w(p, col).is_zero()) ++p;
    if (p == n) return Rational(0);
    if (p != col) {
      swap_rows(w, p, col);
      det = -det;
    }
    det *= w(col, col);
    Rational pinv = w(col, col).inverse();
    for (size_t r = col + 1; r < n; ++r) {
      if (w(r, col).is_zero()) continue;
      Rational f = w(r, col) * pinv;
      for (size_t c = col; c < n; ++c)
        if (!w(col, c).is_zero()) w(r, c).sub_mul(f, w(col, c));
    }
  }
  return det;
}

std::optional<Vector> solve(const Matrix& m, const Vector& b) {
  if (b.size() != m.rows()) throw InputError("solve: right-hand side has wrong length");
  Matrix aug(m.rows(), m.cols() + 1);
  aug.set_block(0, 0, m);
  for (size_t r = 0; r < m.rows(); ++r) aug(r, m.cols()) = b[r];
  Echelon e = row_reduce(aug);
  if (!e.pivot_columns.empty() && e.pivot_columns.back() == m.cols()) return std::nullopt;
  Vector x(m.cols());
  for (size_t i = 0; i < e.pivot_columns.size(); ++i) x[e.pivot_columns[i]] = e.rref(i, m.cols());
  return x;
}

std::optional<Matrix> solve(const Matrix& m, const Matrix& b) {
  if (b.rows() != m.rows()) throw InputError("solve: right-hand side has wrong row count");
  Matrix aug = hstack(m, b);
  Echelon e = row_reduce(aug);
  for (size_t pc : e.pivot_columns)
    if (pc >= m.cols()) return std::nullopt;
  Matrix x(m.cols(), b.cols());
  for (size_t i = 0; i < e.pivot_columns.size(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) x(e.pivot_columns[i], j) = e.rref(i, m.cols() + j);
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("inverse of a non-square matrix");
  if (rank(m) != m.rows()) return std::nullopt;
  return solve(m, Matrix::identity(m.rows()));
}

Matrix column_basis(const Matrix& span) {
  auto cs = column_space_analysis(span);
  return span.select_columns(cs.pivot_columns);
}

Matrix intersect(const Matrix& a, const Matrix& b, size_t ambient) {
  if (a.cols() == 0 || b.cols() == 0) return empty_columns(ambient);
  Matrix joint = hstack(a, Rational(-1) * b);
  Matrix k = kernel(joint);
  Matrix ka = k.block(0, 0, a.cols(), k.cols());
  return column_basis(a * ka);
}

Matrix complement_columns(const Matrix& z, const Matrix& den, size_t ambient) {
  if (z.cols() == 0) return empty_columns(ambient);
  Matrix joint = den.cols() ? hstack(den, z) : z;
  auto cs = column_space_analysis(joint);
  std::vector<size_t> pick;
  for (size_t pc : cs.pivot_columns)
    if (pc >= den.cols()) pick.push_back(pc - den.cols());
  return z.select_columns(pick);
}

Matrix annihilator(const Matrix& s, size_t ambient) {
  if (s.cols() == 0) return Matrix::identity(ambient);
  return kernel(s.transpose()).transpose();
}

bool contained_in(const Matrix& a, const Matrix& b, size_t ambient) {
  if (a.cols() == 0) return true;
  if (b.cols() == 0) return a.is_zero();
  (void)ambient;
  return rank(hstack(b, a)) == rank(b);
}

}  // namespace ttwist
