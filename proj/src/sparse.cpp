#include "rtadapt/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rtadapt {

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<Triplet> entries) : rows_(rows), cols_(cols) {
  for (const auto& t : entries)
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::out_of_range("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) + ") out of range");
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  offsets_.assign(static_cast<std::size_t>(rows) + 1, 0);
  columns_.reserve(entries.size());
  values_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size();) {
    const Triplet& t = entries[i];
    double sum = 0.0;
    std::size_t j = i;
    for (; j < entries.size() && entries[j].row == t.row && entries[j].col == t.col; ++j) sum += entries[j].value;
    columns_.push_back(t.col);
    values_.push_back(sum);
    ++offsets_[static_cast<std::size_t>(t.row) + 1];
    i = j;
  }
  for (std::size_t r = 1; r < offsets_.size(); ++r) offsets_[r] += offsets_[r - 1];
}

double SparseMatrix::coeff(Index i, Index j) const {
  const auto begin = columns_.begin() + offsets_[static_cast<std::size_t>(i)];
  const auto end = columns_.begin() + offsets_[static_cast<std::size_t>(i) + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - columns_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (Index p = offsets_[static_cast<std::size_t>(r)]; p < offsets_[static_cast<std::size_t>(r) + 1]; ++p)
      sum += values_[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(columns_[static_cast<std::size_t>(p)])];
    y[static_cast<std::size_t>(r)] = sum;
  }
}

void SparseMatrix::multiply_serial(std::span<const double> x, std::span<double> y) const {
  for (Index r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (Index p = offsets_[static_cast<std::size_t>(r)]; p < offsets_[static_cast<std::size_t>(r) + 1]; ++p)
      sum += values_[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(columns_[static_cast<std::size_t>(p)])];
    y[static_cast<std::size_t>(r)] = sum;
  }
}

double SparseMatrix::asymmetry() const {
  double worst = 0.0;
  for (Index r = 0; r < rows_; ++r)
    for (Index p = offsets_[static_cast<std::size_t>(r)]; p < offsets_[static_cast<std::size_t>(r) + 1]; ++p) {
      const Index c = columns_[static_cast<std::size_t>(p)];
      worst = std::max(worst, std::abs(values_[static_cast<std::size_t>(p)] - coeff(c, r)));
    }
  return worst;
}

}  // namespace rtadapt
