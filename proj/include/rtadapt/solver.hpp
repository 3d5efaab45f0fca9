#pragma once

#include "rtadapt/assembly.hpp"

#include <stdexcept>
#include <vector>

namespace rtadapt {

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, double residual = -1.0)
      : std::runtime_error(what), residual_(residual) {}
  /// Achieved relative residual, or -1 when factorization itself failed.
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct SolveOptions {
  double residual_tolerance = 1e-10;
  int refinement_steps = 2;
};

/// Sparse LU solve of A x = b. Throws SolveError naming an empty or singular
/// row, or carrying the achieved residual when the tolerance is missed.
std::vector<double> solve_linear(const SparseMatrix& A, std::span<const double> b,
                                 const SolveOptions& options = {});

/// ||A x - b||_2 / ||b||_2 (absolute norm when b = 0).
double relative_residual(const SparseMatrix& A, std::span<const double> x, std::span<const double> b);

/// Solves the saddle-point system and maps back to edge and element values,
/// including eliminated Neumann degrees of freedom.
MixedSolution solve(const SaddleSystem& system, const SolveOptions& options = {});

}  // namespace rtadapt
