#include "ttwist/sparse.hpp"

#include <algorithm>

#include "ttwist/errors.hpp"

namespace ttwist {

SparseColumn make_sparse_column(std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.row < b.row; });
  SparseColumn out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (!out.empty() && out.back().row == e.row) {
      out.back().value += e.value;
    } else {
      if (!out.empty() && out.back().value.is_zero()) out.pop_back();
      out.push_back(std::move(e));
    }
  }
  if (!out.empty() && out.back().value.is_zero()) out.pop_back();
  return out;
}

void SparseMatrix::push_column(SparseColumn c) {
  for (const auto& e : c)
    if (e.row >= rows_) throw InputError("sparse column entry exceeds row count");
  cols_.push_back(std::move(c));
}

size_t SparseMatrix::nonzeros() const {
  size_t n = 0;
  for (const auto& c : cols_) n += c.size();
  return n;
}

bool SparseMatrix::is_zero() const {
  for (const auto& c : cols_)
    if (!c.empty()) return false;
  return true;
}

Matrix SparseMatrix::to_dense() const {
  Matrix m(rows_, cols_.size());
  for (size_t c = 0; c < cols_.size(); ++c)
    for (const auto& e : cols_[c]) m(e.row, c) = e.value;
  return m;
}

SparseMatrix SparseMatrix::from_dense(const Matrix& m) {
  SparseMatrix s(m.rows(), 0);
  for (size_t c = 0; c < m.cols(); ++c) {
    SparseColumn col;
    for (size_t r = 0; r < m.rows(); ++r)
      if (!m(r, c).is_zero()) col.push_back({static_cast<uint32_t>(r), m(r, c)});
    s.push_column(std::move(col));
  }
  return s;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_.size() != b.cols_.size()) return false;
  for (size_t c = 0; c < a.cols_.size(); ++c) {
    const auto& x = a.cols_[c];
    const auto& y = b.cols_[c];
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i].row != y[i].row || x[i].value != y[i].value) return false;
  }
  return true;
}

SparseColumn axpy_sub(const SparseColumn& a, const Rational& f, const SparseColumn& b) {
  SparseColumn out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].row < b[j].row)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].row < a[i].row) {
      SparseEntry e{b[j].row, Rational(0)};
      e.value.sub_mul(f, b[j].value);
      out.push_back(std::move(e));
      ++j;
    } else {
      SparseEntry e = a[i];
      e.value.sub_mul(f, b[j].value);
      if (!e.value.is_zero()) out.push_back(std::move(e));
      ++i, ++j;
    }
  }
  return out;
}

SparseColumn apply(const SparseMatrix& a, const SparseColumn& v) {
  std::vector<SparseEntry> acc;
  for (const auto& e : v)
    for (const auto& x : a.column(e.row)) {
      SparseEntry t{x.row, Rational(0)};
      t.value.add_mul(x.value, e.value);
      acc.push_back(std::move(t));
    }
  return make_sparse_column(std::move(acc));
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("sparse product shape mismatch");
  SparseMatrix out(a.rows(), 0);
  for (size_t c = 0; c < b.cols(); ++c) out.push_column(apply(a, b.column(c)));
  return out;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("sparse sum shape mismatch");
  SparseMatrix out(a.rows(), 0);
  for (size_t c = 0; c < a.cols(); ++c) out.push_column(axpy_sub(a.column(c), Rational(-1), b.column(c)));
  return out;
}

std::optional<uint32_t> ColumnReducer::add(SparseColumn col) {
  while (!col.empty()) {
    uint32_t low = col.back().row;
    if (low < owner_.size() && owner_[low] >= 0) {
      const SparseColumn& r = reduced_[static_cast<size_t>(owner_[low])];
      Rational f = col.back().value;  // reduced columns have pivot entry 1
      col = axpy_sub(col, f, r);
      continue;
    }
    Rational inv = col.back().value.inverse();
    if (!inv.is_one())
      for (auto& e : col) e.value *= inv;
    if (owner_.size() <= low) owner_.resize(static_cast<size_t>(low) + 1, -1);
    owner_[low] = static_cast<int64_t>(reduced_.size());
    reduced_.push_back(std::move(col));
    pivots_.push_back(low);
    return low;
  }
  pivots_.push_back(std::nullopt);
  return std::nullopt;
}

size_t ColumnReducer::rank_in_region(size_t prefix, uint32_t row_threshold) const {
  size_t n = 0;
  prefix = std::min(prefix, pivots_.size());
  for (size_t i = 0; i < prefix; ++i)
    if (pivots_[i] && *pivots_[i] >= row_threshold) ++n;
  return n;
}

size_t sparse_rank(const SparseMatrix& m) {
  ColumnReducer red;
  for (size_t c = 0; c < m.cols(); ++c) red.add(m.column(c));
  return red.rank();
}

}  // namespace ttwist
