#pragma once

#include "rtadapt/geometry.hpp"

#include <array>
#include <vector>

namespace rtadapt {

/// Triangle rule in barycentric coordinates; weights sum to one and are scaled
/// by the element area on use.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;

  Vec2 map(std::size_t q, const std::array<Vec2, 3>& corners) const {
    const auto& b = points[q];
    return b[0] * corners[0] + b[1] * corners[1] + b[2] * corners[2];
  }
  std::size_t size() const { return weights.size(); }
};

/// Three edge midpoints, exact for quadratics.
const QuadratureRule& edge_midpoint_rule();

/// Seven-point degree-5 rule (centroid plus two symmetric orbits).
const QuadratureRule& seven_point_rule();

/// Largest monomial degree the rule integrates exactly on the reference
/// triangle (0,0),(1,0),(0,1), checked against closed-form moments to tol.
int verified_degree(const QuadratureRule& rule, double tol = 1e-14, int max_degree = 12);

/// Integral of x^i y^j over the reference triangle: i! j! / (i + j + 2)!.
double reference_monomial_integral(int i, int j);

/// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
/// Cached rule for 1 <= n <= 64.
const GaussLegendre& gauss_legendre(int n);

template <class F>
double integrate(const QuadratureRule& rule, const std::array<Vec2, 3>& corners, double area, F&& f) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * f(rule.map(q, corners));
  return sum * area;
}

/// Integral over the segment [a, b] with an n-point Gauss rule.
template <class F>
double integrate_segment(const Vec2& a, const Vec2& b, int n, F&& f) {
  const GaussLegendre& gl = gauss_legendre(n);
  const double len = (b - a).norm();
  double sum = 0.0;
  for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
    const double t = 0.5 * (gl.nodes[q] + 1.0);
    sum += 0.5 * gl.weights[q] * f(Vec2(a + t * (b - a)));
  }
  return sum * len;
}

}  // namespace rtadapt
