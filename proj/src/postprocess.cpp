#include "rtadapt/postprocess.hpp"

#include "rtadapt/quadrature.hpp"

#include <cmath>

namespace rtadapt {

double ElementQuadratic::value(const Vec2& x) const {
  const auto& c = coeffs;
  return c[0] + c[1] * x.x() + c[2] * x.y() + c[3] * x.x() * x.x() + c[4] * x.x() * x.y() + c[5] * x.y() * x.y();
}

Vec2 ElementQuadratic::gradient(const Vec2& x) const {
  const auto& c = coeffs;
  return Vec2(c[1] + 2.0 * c[3] * x.x() + c[4] * x.y(), c[2] + c[4] * x.x() + 2.0 * c[5] * x.y());
}

ElementQuadratic build_ptilde(const Triangulation& mesh, Index k, const AffineFlux& u, double p_K, const Mat2& S) {
  // grad p = -G (a + b x) with G = S^-1, i.e. p = c - (G a) . x - (b / 2) x . G x
  const Mat2 G = S.inverse();
  const Vec2 Ga = G * u.a;
  ElementQuadratic q;
  q.element = k;
  q.coeffs[1] = -Ga.x();
  q.coeffs[2] = -Ga.y();
  q.coeffs[3] = -0.5 * u.b * G(0, 0);
  q.coeffs[4] = -0.5 * u.b * (G(0, 1) + G(1, 0));
  q.coeffs[5] = -0.5 * u.b * G(1, 1);
  const double area = mesh.element(k).area;
  const double mean = integrate(edge_midpoint_rule(), mesh.corners(k), area, [&](const Vec2& x) { return q.value(x); }) / area;
  q.coeffs[0] = p_K - mean;
  return q;
}

std::vector<ElementQuadratic> postprocess(const Triangulation& mesh, const ProblemData& problem,
                                          const MixedSolution& solution) {
  std::vector<ElementQuadratic> out(static_cast<std::size_t>(mesh.num_elements()));
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < mesh.num_elements(); ++k)
    out[static_cast<std::size_t>(k)] =
        build_ptilde(mesh, k, solution.on(mesh, k), solution.pressure[static_cast<std::size_t>(k)], problem.on(mesh, k).S);
  return out;
}

std::vector<double> nodal_average(const Triangulation& mesh, std::span<const ElementQuadratic> ptilde) {
  std::vector<double> out(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const auto incident = mesh.elements_at_vertex(v);
    double sum = 0.0;
    for (Index k : incident) sum += ptilde[static_cast<std::size_t>(k)].value(mesh.vertex(v));
    out[static_cast<std::size_t>(v)] = incident.empty() ? 0.0 : sum / static_cast<double>(incident.size());
  }
  return out;
}

std::vector<AffineVectorField> weighted_flux(const Triangulation& mesh, const ProblemData& problem,
                                             const MixedSolution& solution, FluxWeight weight) {
  std::vector<AffineVectorField> out(static_cast<std::size_t>(mesh.num_elements()));
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    const Mat2& S = problem.on(mesh, k).S;
    const Mat2 W = weight == FluxWeight::inverse ? Mat2(S.inverse()) : inverse_sqrt_spd(S);
    const AffineFlux u = solution.on(mesh, k);
    out[static_cast<std::size_t>(k)] = AffineVectorField{W * u.a, u.b * W};
  }
  return out;
}

double tangential_jump_sq(const Triangulation& mesh, std::span<const AffineVectorField> field, Index e) {
  const Edge& ed = mesh.edge(e);
  const Vec2 t = tangent_of(ed.normal);
  const Vec2& a = mesh.vertex(ed.vertices[0]);
  const Vec2& b = mesh.vertex(ed.vertices[1]);
  const auto& K = field[static_cast<std::size_t>(ed.elements[0])];
  if (ed.elements[1] == invalid_index)
    return integrate_segment(a, b, 2, [&](const Vec2& x) { return std::pow(K(x).dot(t), 2); });
  const auto& L = field[static_cast<std::size_t>(ed.elements[1])];
  return integrate_segment(a, b, 2, [&](const Vec2& x) { return std::pow((K(x) - L(x)).dot(t), 2); });
}

std::vector<double> tangential_jumps_sq(const Triangulation& mesh, std::span<const AffineVectorField> field) {
  std::vector<double> out(static_cast<std::size_t>(mesh.num_edges()));
#pragma omp parallel for schedule(static)
  for (Index e = 0; e < mesh.num_edges(); ++e) out[static_cast<std::size_t>(e)] = tangential_jump_sq(mesh, field, e);
  return out;
}

double tangential_jump_sq(const Triangulation& mesh, const ProblemData& problem,
                          std::span<const AffineVectorField> field, FluxWeight weight, Index e) {
  const Edge& ed = mesh.edge(e);
  if (ed.flag == BoundaryFlag::interior) return tangential_jump_sq(mesh, field, e);
  if (ed.flag == BoundaryFlag::neumann) return 0.0;
  const Index k = ed.elements[0];
  const Vec2 t = tangent_of(ed.normal);
  const Mat2& S = problem.on(mesh, k).S;
  const double scale = weight == FluxWeight::inverse ? 1.0 : t.dot(S * inverse_sqrt_spd(S) * t);
  const auto& K = field[static_cast<std::size_t>(k)];
  const double step = 1e-3 * ed.length;
  return integrate_segment(mesh.vertex(ed.vertices[0]), mesh.vertex(ed.vertices[1]), 5, [&](const Vec2& x) {
    return std::pow(K(x).dot(t) + scale * problem.dirichlet_tangential_derivative(x, t, step), 2);
  });
}

double tangential_jump_sq(const Triangulation& mesh, const ProblemData& problem, const MixedSolution& solution,
                          Index e) {
  return tangential_jump_sq(mesh, problem, weighted_flux(mesh, problem, solution, FluxWeight::inverse),
                            FluxWeight::inverse, e);
}

double tangential_jump_sq_scaled(const Triangulation& mesh, const ProblemData& problem,
                                 const MixedSolution& solution, Index e) {
  return tangential_jump_sq(mesh, problem, weighted_flux(mesh, problem, solution, FluxWeight::inverse_sqrt),
                            FluxWeight::inverse_sqrt, e);
}

}  // namespace rtadapt
