#pragma once

#include "rtadapt/assembly.hpp"
#include "rtadapt/postprocess.hpp"
#include "rtadapt/problem.hpp"

#include <string_view>
#include <vector>

namespace rtadapt {

enum class IndicatorPolicy { theorem, xi };

IndicatorPolicy parse_policy(std::string_view name);
std::string_view to_string(IndicatorPolicy p);

struct ResidualWeights {
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha = min(h / sqrt(c_S), 1 / sqrt(c_wr)), read as h / sqrt(c_S) when
/// c_wr = 0; beta = C_wr h alpha.
ResidualWeights residual_weights(double h_K, const CoefficientBounds& b);

/// Difference between the upwind face value and the centred one, seen from
/// the element owning p_K. On a boundary side p_other is the exterior
/// (Dirichlet) value; with zero exterior data this is -nu p_K for outflow and
/// -(1 - nu) p_K for inflow.
double hat_hat_p(double nu, double w_K_sigma, double p_K, double p_other, bool boundary);

/// Vertices where the elements of maximal diffusion in the vertex star do not
/// form one edge-connected fan.
std::vector<char> detect_singular_vertices(const Triangulation& mesh, std::span<const CoefficientBounds> bounds);

/// Squared elementwise estimators. Families are kept squared so totals are
/// sums of exactly the stored numbers.
struct EstimatorBreakdown {
  std::vector<double> eta_D2, eta_R2, eta_NC2, eta_C2, eta_U2, xi2, total2;
  Scheme scheme = Scheme::centered;
  IndicatorPolicy policy = IndicatorPolicy::theorem;

  struct Totals {
    double eta_D = 0, eta_R = 0, eta_NC = 0, eta_C = 0, eta_U = 0, xi = 0, total = 0;
  };
  /// Square roots of the sums of squares, summed serially in element order.
  Totals global() const;
  std::vector<double> total() const;
};

/// Precomputed per-edge and per-element data shared by the estimators.
/// Construction is OpenMP-parallel unless parallel is false; each query is a
/// pure function.
class EstimatorContext {
 public:
  EstimatorContext(const Triangulation& mesh, const ProblemData& problem, const MixedSolution& solution,
                   bool parallel = true);

  double eta_D2(Index k) const;
  double eta_R2(Index k) const;
  double eta_NC2(Index k) const;
  double eta_C2(Index k) const;
  /// Throws std::logic_error for a centred-scheme solution.
  double eta_U2(Index k) const;
  double xi2(Index k) const;
  double total2(Index k, IndicatorPolicy policy) const;

  /// ||S^-1 u_h||_K^2.
  double flux_norm2(Index k) const { return flux_norm2_[static_cast<std::size_t>(k)]; }
  double jump_sq(Index e) const { return jump_[static_cast<std::size_t>(e)]; }
  double jump_sq_scaled(Index e) const { return jump_scaled_[static_cast<std::size_t>(e)]; }
  bool touches_singular_vertex(Index k) const;
  const PatchQuantities& patch() const { return patch_; }
  const CoefficientBounds& bounds(Index k) const { return bounds_[static_cast<std::size_t>(k)]; }
  double hat_hat(Index k, int local_edge) const;
  Scheme scheme() const { return solution_.scheme; }

 private:
  const Triangulation& mesh_;
  const ProblemData& problem_;
  const MixedSolution& solution_;
  std::vector<CoefficientBounds> bounds_;
  PatchQuantities patch_;
  std::vector<AffineVectorField> weighted_;
  std::vector<double> flux_norm2_;
  std::vector<double> jump_;
  std::vector<double> jump_scaled_;
  std::vector<double> load_;
  std::vector<char> singular_;
  UpwindData upwind_;
};

/// All families on every element; OpenMP-parallel over elements.
EstimatorBreakdown estimate(const Triangulation& mesh, const ProblemData& problem, const MixedSolution& solution,
                            IndicatorPolicy policy);

/// Serial reference of estimate().
EstimatorBreakdown estimate_serial(const Triangulation& mesh, const ProblemData& problem,
                                   const MixedSolution& solution, IndicatorPolicy policy);

}  // namespace rtadapt
