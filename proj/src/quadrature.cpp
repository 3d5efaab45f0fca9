#include "rtadapt/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtadapt {

namespace {

QuadratureRule make_seven_point() {
  const double s15 = std::sqrt(15.0);
  const double a1 = (6.0 - s15) / 21.0;
  const double b1 = (9.0 + 2.0 * s15) / 21.0;
  const double w1 = (155.0 - s15) / 1200.0;
  const double a2 = (6.0 + s15) / 21.0;
  const double b2 = (9.0 - 2.0 * s15) / 21.0;
  const double w2 = (155.0 + s15) / 1200.0;
  QuadratureRule r;
  r.degree = 5;
  r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
              {a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1},
              {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2}};
  r.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
  return r;
}

QuadratureRule make_midpoint() {
  QuadratureRule r;
  r.degree = 2;
  r.points = {{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}};
  r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return r;
}

const QuadratureRule& validated(const QuadratureRule& rule) {
  if (verified_degree(rule) < rule.degree)
    throw std::logic_error("quadrature rule fails its declared exactness degree");
  return rule;
}

}  // namespace

const QuadratureRule& edge_midpoint_rule() {
  static const QuadratureRule rule = make_midpoint();
  static const QuadratureRule& checked = validated(rule);
  return checked;
}

const QuadratureRule& seven_point_rule() {
  static const QuadratureRule rule = make_seven_point();
  static const QuadratureRule& checked = validated(rule);
  return checked;
}

double reference_monomial_integral(int i, int j) {
  return std::tgamma(i + 1.0) * std::tgamma(j + 1.0) / std::tgamma(i + j + 3.0);
}

int verified_degree(const QuadratureRule& rule, double tol, int max_degree) {
  const std::array<Vec2, 3> ref{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  for (int d = 0; d <= max_degree; ++d) {
    for (int i = 0; i <= d; ++i) {
      const int j = d - i;
      const double q = integrate(rule, ref, 0.5, [&](const Vec2& x) {
        return std::pow(x.x(), i) * std::pow(x.y(), j);
      });
      const double exact = reference_monomial_integral(i, j);
      if (std::abs(q - exact) > tol * std::max(1.0, std::abs(exact))) return d - 1;
    }
  }
  return max_degree;
}

namespace {

GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(static_cast<std::size_t>(n));
  gl.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    gl.nodes[static_cast<std::size_t>(i)] = x;
    gl.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  static const std::vector<GaussLegendre> table = [] {
    std::vector<GaussLegendre> t(65);
    for (int i = 1; i <= 64; ++i) t[static_cast<std::size_t>(i)] = compute_gauss_legendre(i);
    return t;
  }();
  if (n < 1 || n > 64) throw std::out_of_range("Gauss-Legendre order must be in [1, 64]");
  return table[static_cast<std::size_t>(n)];
}

}  // namespace rtadapt
