#include "rtadapt/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <string>

namespace rtadapt {

namespace {

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& A) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(A.nonzeros());
  const auto off = A.row_offsets();
  const auto col = A.column_indices();
  const auto val = A.values();
  for (Index r = 0; r < A.rows(); ++r)
    for (Index p = off[static_cast<std::size_t>(r)]; p < off[static_cast<std::size_t>(r) + 1]; ++p)
      t.emplace_back(r, col[static_cast<std::size_t>(p)], val[static_cast<std::size_t>(p)]);
  Eigen::SparseMatrix<double> out(A.rows(), A.cols());
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

}  // namespace

double relative_residual(const SparseMatrix& A, std::span<const double> x, std::span<const double> b) {
  std::vector<double> ax(b.size());
  A.multiply_serial(x, ax);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    num += (ax[i] - b[i]) * (ax[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::vector<double> solve_linear(const SparseMatrix& A, std::span<const double> b, const SolveOptions& options) {
  if (A.rows() != A.cols() || static_cast<std::size_t>(A.rows()) != b.size())
    throw SolveError("system dimensions do not match");
  const auto off = A.row_offsets();
  const auto val = A.values();
  for (Index r = 0; r < A.rows(); ++r) {
    bool any = false;
    for (Index p = off[static_cast<std::size_t>(r)]; p < off[static_cast<std::size_t>(r) + 1]; ++p)
      any = any || val[static_cast<std::size_t>(p)] != 0.0;
    if (!any) throw SolveError("matrix row " + std::to_string(r) + " is zero");
  }

  const Eigen::SparseMatrix<double> M = to_eigen(A);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw SolveError("sparse LU factorization failed (matrix is numerically singular)");

  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw SolveError("sparse LU solve produced non-finite values");
  std::vector<double> out(x.data(), x.data() + x.size());
  double res = relative_residual(A, out, b);
  for (int step = 0; step < options.refinement_steps && res > options.residual_tolerance; ++step) {
    const Eigen::VectorXd r = rhs - M * x;
    x += lu.solve(r);
    out.assign(x.data(), x.data() + x.size());
    res = relative_residual(A, out, b);
  }
  if (!(res <= options.residual_tolerance))
    throw SolveError("relative residual " + std::to_string(res) + " exceeds tolerance", res);
  return out;
}

MixedSolution solve(const SaddleSystem& system, const SolveOptions& options) {
  const auto x = solve_linear(system.matrix, system.rhs, options);
  MixedSolution sol;
  sol.scheme = system.scheme;
  sol.flux.resize(system.edge_row.size());
  for (std::size_t e = 0; e < system.edge_row.size(); ++e) {
    const Index row = system.edge_row[e];
    sol.flux[e] = row == invalid_index ? system.fixed_flux[e] : x[static_cast<std::size_t>(row)];
  }
  sol.pressure.resize(static_cast<std::size_t>(system.num_elements));
  for (Index k = 0; k < system.num_elements; ++k)
    sol.pressure[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(system.element_row(k))];
  return sol;
}

}  // namespace rtadapt
