#pragma once

#include "rtadapt/assembly.hpp"

#include <array>
#include <vector>

namespace rtadapt {

/// Elementwise quadratic in global monomials 1, x, y, x^2, xy, y^2 with
/// -S_K grad p = u_h on K and mean value p_K.
struct ElementQuadratic {
  Index element = invalid_index;
  std::array<double, 6> coeffs{};

  double value(const Vec2& x) const;
  Vec2 gradient(const Vec2& x) const;
};

ElementQuadratic build_ptilde(const Triangulation& mesh, Index k, const AffineFlux& u, double p_K, const Mat2& S);

std::vector<ElementQuadratic> postprocess(const Triangulation& mesh, const ProblemData& problem,
                                          const MixedSolution& solution);

/// Vertex values: mean over incident elements of their quadratic at the vertex.
std::vector<double> nodal_average(const Triangulation& mesh, std::span<const ElementQuadratic> ptilde);

/// x -> c + L x on one element.
struct AffineVectorField {
  Vec2 c = Vec2::Zero();
  Mat2 L = Mat2::Zero();

  Vec2 operator()(const Vec2& x) const { return c + L * x; }
};

enum class FluxWeight { inverse, inverse_sqrt };

/// S^-1 u_h (or S^-1/2 u_h) on every element.
std::vector<AffineVectorField> weighted_flux(const Triangulation& mesh, const ProblemData& problem,
                                             const MixedSolution& solution, FluxWeight weight);

/// Integral over edge e of the squared jump of the tangential component of a
/// piecewise affine field; the one-sided trace on boundary edges.
double tangential_jump_sq(const Triangulation& mesh, std::span<const AffineVectorField> field, Index e);

/// The same for every edge (OpenMP-parallel).
std::vector<double> tangential_jumps_sq(const Triangulation& mesh, std::span<const AffineVectorField> field);

/// Jump of the weighted flux W u_h measured against the boundary data: on a
/// Dirichlet side the exterior trace is that of W u = -W S grad p, i.e.
/// -(t . W S t) d_t p_D, so the exact flux has zero jump; Neumann sides carry
/// no tangential jump. Interior sides are as above.
double tangential_jump_sq(const Triangulation& mesh, const ProblemData& problem,
                          std::span<const AffineVectorField> field, FluxWeight weight, Index e);

/// Data-aware jumps of S^-1 u_h and S^-1/2 u_h for a single side.
double tangential_jump_sq(const Triangulation& mesh, const ProblemData& problem, const MixedSolution& solution,
                          Index e);
double tangential_jump_sq_scaled(const Triangulation& mesh, const ProblemData& problem,
                                 const MixedSolution& solution, Index e);

}  // namespace rtadapt
