#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ttwist/matrix.hpp"

namespace ttwist {

struct SparseEntry {
  uint32_t row;
  Rational value;
};

/// Sorted by row, no explicit zeros.
using SparseColumn = std::vector<SparseEntry>;

/// Canonicalizes an unsorted list of (row, value) pairs: sorts, merges
/// duplicates, drops zeros.
SparseColumn make_sparse_column(std::vector<SparseEntry> entries);

/// Column-oriented sparse rational matrix.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_.size(); }
  void resize_rows(size_t rows) { rows_ = rows; }

  void push_column(SparseColumn c);
  const SparseColumn& column(size_t c) const { return cols_.at(c); }
  SparseColumn& column(size_t c) { return cols_.at(c); }

  size_t nonzeros() const;
  bool is_zero() const;
  Matrix to_dense() const;
  static SparseMatrix from_dense(const Matrix& m);

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

 private:
  size_t rows_ = 0;
  std::vector<SparseColumn> cols_;
};

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
SparseColumn apply(const SparseMatrix& a, const SparseColumn& v);

/// a - f * b for sorted sparse columns.
SparseColumn axpy_sub(const SparseColumn& a, const Rational& f, const SparseColumn& b);

/// Incremental left-to-right column reduction with pivot = largest row index,
/// as in persistence computations. Columns are only ever reduced against
/// earlier columns, so for any row threshold t and column prefix k the rank
/// of the submatrix (rows >= t, first k columns) equals the number of pivots
/// in that region.
class ColumnReducer {
 public:
  /// Reduces `col` against everything added so far and records its pivot.
  std::optional<uint32_t> add(SparseColumn col);

  size_t columns_added() const { return pivots_.size(); }
  size_t rank() const { return reduced_.size(); }
  /// Pivot row of the i-th added column, nullopt if it reduced to zero.
  const std::vector<std::optional<uint32_t>>& pivots() const { return pivots_; }

  /// Number of pivots with row >= row_threshold among the first `prefix`
  /// added columns.
  size_t rank_in_region(size_t prefix, uint32_t row_threshold) const;

 private:
  std::vector<SparseColumn> reduced_;
  std::vector<int64_t> owner_;  // row -> index into reduced_, -1 if none
  std::vector<std::optional<uint32_t>> pivots_;
};

/// Exact rank of a sparse matrix.
size_t sparse_rank(const SparseMatrix& m);

}  // namespace ttwist
