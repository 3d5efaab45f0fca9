#include "rtadapt/estimators.hpp"

#include "rtadapt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtadapt {

namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

double delta(const Edge& e) { return e.is_boundary() ? 1.0 : 0.5; }

}  // namespace

IndicatorPolicy parse_policy(std::string_view name) {
  if (name == "theorem") return IndicatorPolicy::theorem;
  if (name == "xi") return IndicatorPolicy::xi;
  throw std::invalid_argument("unknown indicator policy '" + std::string(name) + "'");
}

std::string_view to_string(IndicatorPolicy p) { return p == IndicatorPolicy::theorem ? "theorem" : "xi"; }

ResidualWeights residual_weights(double h_K, const CoefficientBounds& b) {
  ResidualWeights w;
  w.alpha = h_K / std::sqrt(b.c_S);
  if (b.c_wr > 0.0) w.alpha = std::min(w.alpha, 1.0 / std::sqrt(b.c_wr));
  w.beta = b.C_wr * h_K * w.alpha;
  return w;
}

double hat_hat_p(double nu, double w_K_sigma, double p_K, double p_other, bool boundary) {
  const auto c = upwind_value_coeffs(nu, w_K_sigma);
  const double face = c.own * p_K + c.other * p_other;
  return boundary ? face - p_K : face - 0.5 * (p_K + p_other);
}

std::vector<char> detect_singular_vertices(const Triangulation& mesh, std::span<const CoefficientBounds> bounds) {
  std::vector<char> out(at(mesh.num_vertices()), 0);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const VertexStar star = mesh.vertex_star(v);
    if (star.elements.empty()) continue;
    double top = 0.0;
    for (Index k : star.elements) top = std::max(top, bounds[at(k)].C_S);
    std::vector<char> maximal;
    maximal.reserve(star.elements.size());
    for (Index k : star.elements) maximal.push_back(bounds[at(k)].C_S >= top * (1.0 - 1e-9) ? 1 : 0);
    // Count runs of maximal elements along the (cyclic for interior vertices) fan.
    const std::size_t n = maximal.size();
    int runs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!maximal[i]) continue;
      const bool continues = i > 0 ? maximal[i - 1] != 0 : (!star.boundary && maximal[n - 1] != 0 && n > 1);
      if (!continues) ++runs;
    }
    // All maximal around an interior vertex: one run with no start.
    if (runs == 0 && std::find(maximal.begin(), maximal.end(), 1) != maximal.end()) runs = 1;
    out[at(v)] = runs > 1 ? 1 : 0;
  }
  return out;
}

EstimatorBreakdown::Totals EstimatorBreakdown::global() const {
  auto root_sum = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return std::sqrt(s);
  };
  Totals t;
  t.eta_D = root_sum(eta_D2);
  t.eta_R = root_sum(eta_R2);
  t.eta_NC = root_sum(eta_NC2);
  t.eta_C = root_sum(eta_C2);
  t.eta_U = root_sum(eta_U2);
  t.xi = root_sum(xi2);
  t.total = root_sum(total2);
  return t;
}

std::vector<double> EstimatorBreakdown::total() const {
  std::vector<double> out(total2.size());
  std::transform(total2.begin(), total2.end(), out.begin(), [](double x) { return std::sqrt(x); });
  return out;
}

EstimatorContext::EstimatorContext(const Triangulation& mesh, const ProblemData& problem,
                                   const MixedSolution& solution, bool parallel)
    : mesh_(mesh), problem_(problem), solution_(solution) {
  bounds_ = problem.element_bounds(mesh);
  patch_ = patch_quantities(mesh, bounds_);
  const auto nt = mesh.num_elements();
  const auto ne = mesh.num_edges();
  weighted_.resize(at(nt));
  std::vector<AffineVectorField> scaled(at(nt));
  flux_norm2_.resize(at(nt));
  load_.resize(at(nt));
  const QuadratureRule& exact2 = edge_midpoint_rule();
  const QuadratureRule& rule7 = seven_point_rule();
#pragma omp parallel for schedule(static) if (parallel)
  for (Index k = 0; k < nt; ++k) {
    const Mat2& S = problem.on(mesh, k).S;
    const AffineFlux u = solution.on(mesh, k);
    const Mat2 G = S.inverse();
    const Mat2 H = inverse_sqrt_spd(S);
    weighted_[at(k)] = AffineVectorField{G * u.a, u.b * G};
    scaled[at(k)] = AffineVectorField{H * u.a, u.b * H};
    const auto& f = weighted_[at(k)];
    const auto corners = mesh.corners(k);
    const double area = mesh.element(k).area;
    flux_norm2_[at(k)] = integrate(exact2, corners, area, [&](const Vec2& x) { return f(x).squaredNorm(); });
    load_[at(k)] = integrate(rule7, corners, area, problem.source);
  }
  jump_.resize(at(ne));
  jump_scaled_.resize(at(ne));
#pragma omp parallel for schedule(static) if (parallel)
  for (Index e = 0; e < ne; ++e) {
    jump_[at(e)] = tangential_jump_sq(mesh, problem, weighted_, FluxWeight::inverse, e);
    jump_scaled_[at(e)] = tangential_jump_sq(mesh, problem, scaled, FluxWeight::inverse_sqrt, e);
  }
  singular_ = detect_singular_vertices(mesh, bounds_);
  if (solution.scheme == Scheme::upwind) upwind_ = upwind_data(mesh, problem);
}

double EstimatorContext::eta_D2(Index k) const {
  const double h = mesh_.element(k).diameter;
  return bounds_[at(k)].c_wr * h * h * flux_norm2_[at(k)];
}

double EstimatorContext::eta_R2(Index k) const {
  const Element& el = mesh_.element(k);
  const ElementCoefficients& c = problem_.on(mesh_, k);
  const auto& b = bounds_[at(k)];
  const auto wts = residual_weights(el.diameter, b);
  const auto corners = mesh_.corners(k);
  double residual2 = 0.0;
  if (c.w.isZero(0.0) && c.r == 0.0 && c.divw == 0.0) {
    // Pure diffusion: the element equation gives div u_h = f_K, so the
    // residual is f - f_K.
    const double fK = load_[at(k)] / el.area;
    residual2 = integrate(seven_point_rule(), corners, el.area, [&](const Vec2& x) {
      const double r = problem_.source(x) - fK;
      return r * r;
    });
  } else {
    const AffineFlux u = solution_.on(mesh_, k);
    const auto& Gu = weighted_[at(k)];
    const double pK = solution_.pressure[at(k)];
    const double div = u.divergence();
    residual2 = integrate(seven_point_rule(), corners, el.area, [&](const Vec2& x) {
      const double r = problem_.source(x) - div + Gu(x).dot(c.w) - (c.r + c.divw) * pK;
      return r * r;
    });
  }
  return wts.alpha * wts.alpha * residual2 + wts.beta * wts.beta * flux_norm2_[at(k)];
}

double EstimatorContext::eta_NC2(Index k) const {
  const Element& el = mesh_.element(k);
  const double h = el.diameter;
  double sum = patch_.element_reaction_max[at(k)] * h * h * flux_norm2_[at(k)];
  for (Index e : el.edges) {
    const Edge& ed = mesh_.edge(e);
    sum += delta(ed) * patch_.edge_diffusion_max[at(e)] * ed.length * jump_[at(e)];
  }
  return sum;
}

double EstimatorContext::eta_C2(Index k) const {
  const Element& el = mesh_.element(k);
  const double h = el.diameter;
  const double div = patch_.element_divergence[at(k)];
  double sum = div == 0.0 ? 0.0 : div * div * h * h * flux_norm2_[at(k)];
  for (Index e : el.edges) {
    const Edge& ed = mesh_.edge(e);
    const double conv = patch_.edge_convection[at(e)];
    if (conv != 0.0) sum += delta(ed) * conv * conv * ed.length * jump_[at(e)];
  }
  return sum;
}

double EstimatorContext::hat_hat(Index k, int local_edge) const {
  const Element& el = mesh_.element(k);
  const Index e = el.edges[static_cast<std::size_t>(local_edge)];
  const Edge& ed = mesh_.edge(e);
  if (ed.flag == BoundaryFlag::neumann) return 0.0;
  const double wks = flux_through_edge(problem_.on(mesh_, k).w, mesh_, k, local_edge);
  const double pK = solution_.pressure[at(k)];
  const double other =
      ed.is_boundary() ? upwind_.exterior_value[at(e)] : solution_.pressure[at(mesh_.neighbour(k, local_edge))];
  return hat_hat_p(upwind_.nu[at(e)], wks, pK, other, ed.is_boundary());
}

double EstimatorContext::eta_U2(Index k) const {
  if (solution_.scheme != Scheme::upwind) throw std::logic_error("the upwind estimator needs an upwind-scheme solution");
  const Element& el = mesh_.element(k);
  const Vec2& w = problem_.on(mesh_, k).w;
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Index e = el.edges[static_cast<std::size_t>(i)];
    const Edge& ed = mesh_.edge(e);
    const double wn = w.dot(ed.normal);
    if (wn == 0.0) continue;
    double patch_norm = 0.0;
    for (Index j : ed.elements)
      if (j != invalid_index) patch_norm += flux_norm2_[at(j)];
    const double pp = hat_hat(k, i);
    sum += wn * wn * (pp * pp * ed.length + ed.length * patch_norm);
  }
  return el.diameter / bounds_[at(k)].c_S * sum;
}

bool EstimatorContext::touches_singular_vertex(Index k) const {
  for (Index v : mesh_.element(k).vertices)
    if (singular_[at(v)]) return true;
  return false;
}

double EstimatorContext::xi2(Index k) const {
  const Element& el = mesh_.element(k);
  double sum = 0.0;
  if (!touches_singular_vertex(k)) {
    for (Index e : el.edges) sum += mesh_.edge(e).length * jump_scaled_[at(e)];
    return sum;
  }
  double cmax = 0.0;
  for (Index j : mesh_.element_vertex_patch(k)) cmax = std::max(cmax, bounds_[at(j)].C_S);
  for (Index e : el.edges) sum += cmax * mesh_.edge(e).length * jump_[at(e)];
  return sum;
}

double EstimatorContext::total2(Index k, IndicatorPolicy policy) const {
  if (policy == IndicatorPolicy::xi) return xi2(k);
  double t = eta_D2(k) + eta_R2(k) + eta_NC2(k) + eta_C2(k);
  if (solution_.scheme == Scheme::upwind) t += eta_U2(k);
  return t;
}

namespace {

EstimatorBreakdown run_estimate(const Triangulation& mesh, const ProblemData& problem, const MixedSolution& solution,
                                IndicatorPolicy policy, bool parallel) {
  const EstimatorContext ctx(mesh, problem, solution, parallel);
  const auto nt = at(mesh.num_elements());
  EstimatorBreakdown out;
  out.scheme = solution.scheme;
  out.policy = policy;
  for (auto* v : {&out.eta_D2, &out.eta_R2, &out.eta_NC2, &out.eta_C2, &out.eta_U2, &out.xi2, &out.total2})
    v->assign(nt, 0.0);
  const bool upwind = solution.scheme == Scheme::upwind;
#pragma omp parallel for schedule(dynamic, 256) if (parallel)
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    const auto i = at(k);
    out.eta_D2[i] = ctx.eta_D2(k);
    out.eta_R2[i] = ctx.eta_R2(k);
    out.eta_NC2[i] = ctx.eta_NC2(k);
    out.eta_C2[i] = ctx.eta_C2(k);
    out.eta_U2[i] = upwind ? ctx.eta_U2(k) : 0.0;
    out.xi2[i] = ctx.xi2(k);
    if (policy == IndicatorPolicy::xi) {
      out.total2[i] = out.xi2[i];
    } else {
      out.total2[i] = out.eta_D2[i] + out.eta_R2[i] + out.eta_NC2[i] + out.eta_C2[i] + out.eta_U2[i];
    }
  }
  return out;
}

}  // namespace

EstimatorBreakdown estimate(const Triangulation& mesh, const ProblemData& problem, const MixedSolution& solution,
                            IndicatorPolicy policy) {
  return run_estimate(mesh, problem, solution, policy, true);
}

EstimatorBreakdown estimate_serial(const Triangulation& mesh, const ProblemData& problem,
                                   const MixedSolution& solution, IndicatorPolicy policy) {
  return run_estimate(mesh, problem, solution, policy, false);
}

}  // namespace rtadapt
