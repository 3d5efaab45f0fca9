#pragma once

#include "rtadapt/mesh.hpp"
#include "rtadapt/problem.hpp"
#include "rtadapt/sparse.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace rtadapt {

enum class Scheme { centered, upwind };

Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme s);

/// Lowest-order Raviart-Thomas field on one element: x -> a + b x.
struct AffineFlux {
  Vec2 a = Vec2::Zero();
  double b = 0.0;

  Vec2 operator()(const Vec2& x) const { return a + b * x; }
  double divergence() const { return 2.0 * b; }
};

/// Basis function of local edge i of element k: s |sigma| / (2|K|) (x - P),
/// P the vertex opposite the edge. Its normal component along the global
/// edge normal is one on that edge and zero on the other two.
AffineFlux rt0_basis(const Triangulation& mesh, Index k, int local_edge);

struct LocalMatrices {
  std::array<std::array<double, 3>, 3> mass{};  // (S^-1 phi_i, phi_j)_K
  std::array<double, 3> divergence{};           // (div phi_i, 1)_K
  std::array<double, 3> convection{};           // (S^-1 phi_i . w, 1)_K
  double reaction = 0.0;                        // (r + divw) |K|
};

/// Throws MeshError on a degenerate element.
LocalMatrices local_matrices(const Triangulation& mesh, Index k, const ElementCoefficients& coeffs);

/// w_{K,sigma}: integral over local edge i of w . n with n outward to k.
double flux_through_edge(const Vec2& w, const Triangulation& mesh, Index k, int local_edge);

/// Harmonic average of the lower diffusion bounds of the two sides of an
/// interior edge, or the single side's bound on the boundary.
double edge_lower_diffusion(const Triangulation& mesh, std::span<const CoefficientBounds> bounds, Index e);

/// Amount of downstream weighting nu in [0, 1/2].
double upwind_weight(double c_S_edge, double edge_length, double edge_diameter, double w_K_sigma, bool boundary);

/// Face value p_hat = own * p_K + other * p_L (p_L the neighbour, or the
/// exterior value on a boundary side), as seen from element K.
struct UpwindCoefficients {
  double own = 0.0;
  double other = 0.0;
};
UpwindCoefficients upwind_value_coeffs(double nu, double w_K_sigma);

/// Mean of the Dirichlet data over each Dirichlet side (3-point Gauss);
/// zero on other sides.
std::vector<double> dirichlet_edge_means(const Triangulation& mesh, const ProblemData& problem);

/// Prescribed degrees of freedom (normal component along the global normal)
/// on Neumann sides; zero elsewhere.
std::vector<double> neumann_edge_dofs(const Triangulation& mesh, const ProblemData& problem);

/// Per-edge upwind data shared by the upwind assembly and its estimator.
struct UpwindData {
  std::vector<double> nu;              // per edge
  std::vector<double> exterior_value;  // per edge: Dirichlet mean, unused elsewhere
};
UpwindData upwind_data(const Triangulation& mesh, const ProblemData& problem);

/// Linear system for (free edge fluxes, element values). Element rows hold
/// the negated conservation equation so that the w = 0 system is symmetric.
struct SaddleSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
  std::vector<Index> edge_row;    // per edge; invalid_index for Neumann sides
  std::vector<double> fixed_flux; // per edge; prescribed dof on Neumann sides
  Index num_free_edges = 0;
  Index num_elements = 0;
  Scheme scheme = Scheme::centered;

  Index element_row(Index k) const { return num_free_edges + k; }
  Index size() const { return num_free_edges + num_elements; }
};

SaddleSystem assemble_centered(const Triangulation& mesh, const ProblemData& problem);
SaddleSystem assemble_upwind(const Triangulation& mesh, const ProblemData& problem);
SaddleSystem assemble(const Triangulation& mesh, const ProblemData& problem, Scheme scheme);

struct MixedSolution {
  /// Per edge: u_h . n_sigma (global normal), constant along the edge.
  std::vector<double> flux;
  /// Per element: p_K.
  std::vector<double> pressure;
  Scheme scheme = Scheme::centered;

  /// Reconstruction of u_h on element k.
  AffineFlux on(const Triangulation& mesh, Index k) const;
};

/// Elementwise conservation defect of a solution for its own scheme:
/// the element equation with phi = indicator of K, minus the load.
std::vector<double> conservation_defects(const Triangulation& mesh, const ProblemData& problem,
                                         const MixedSolution& solution);

/// Integral of the centered residual f - div u_h + (S^-1 u_h) . w - (r + divw) p_h over each element.
std::vector<double> centered_residual_integrals(const Triangulation& mesh, const ProblemData& problem,
                                                const MixedSolution& solution);

/// Integral of f over each element with the seven-point rule.
std::vector<double> source_integrals(const Triangulation& mesh, const ProblemData& problem);

}  // namespace rtadapt
