#pragma once

#include "rtadapt/geometry.hpp"

#include <span>
#include <vector>

namespace rtadapt {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed row storage with sorted, duplicate-free column indices.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Duplicates are summed; explicit zeros are kept so the pattern stays
  /// structurally symmetric.
  SparseMatrix(Index rows, Index cols, std::vector<Triplet> entries);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const Index> row_offsets() const { return offsets_; }
  std::span<const Index> column_indices() const { return columns_; }
  std::span<const double> values() const { return values_; }

  /// Entry (i, j), zero when absent.
  double coeff(Index i, Index j) const;

  /// y = A x; OpenMP-parallel over rows.
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// Serial reference of multiply.
  void multiply_serial(std::span<const double> x, std::span<double> y) const;

  /// max |A_ij - A_ji| over the pattern.
  double asymmetry() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> offsets_{0};
  std::vector<Index> columns_;
  std::vector<double> values_;
};

}  // namespace rtadapt
