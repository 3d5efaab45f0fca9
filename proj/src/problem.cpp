#include "rtadapt/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rtadapt {

CoefficientBounds derive_bounds(const ElementCoefficients& c) {
  const Mat2& S = c.S;
  const double scale = S.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale) || std::abs(S(0, 1) - S(1, 0)) > 1e-12 * scale)
    throw ProblemError("diffusion tensor is not symmetric");
  const auto eig = symmetric_eigenvalues(S);
  if (!(eig[0] > 0.0)) throw ProblemError("diffusion tensor is not positive definite");

  CoefficientBounds b;
  b.c_S = eig[0];
  b.C_S = eig[1];
  b.C_w = c.w.norm();
  b.c_wr = 0.5 * c.divw + c.r;
  b.C_wr = std::abs(c.divw + c.r);
  b.C_divw = std::abs(c.divw);
  if (!std::isfinite(b.C_w) || !std::isfinite(b.c_wr)) throw ProblemError("non-finite coefficient");
  if (b.c_wr < 0.0) throw ProblemError("divw / 2 + r must be non-negative");
  if (b.c_wr == 0.0 && b.C_wr != 0.0) throw ProblemError("c_wr = 0 requires |divw + r| = 0");
  return b;
}

double over_sqrt_reaction(double numerator, double c_wr) {
  if (numerator == 0.0) return 0.0;
  if (c_wr == 0.0) return std::numeric_limits<double>::infinity();
  return numerator / std::sqrt(c_wr);
}

PatchQuantities patch_quantities(const Triangulation& mesh, std::span<const CoefficientBounds> bounds) {
  const auto ne = static_cast<std::size_t>(mesh.num_edges());
  const auto nt = static_cast<std::size_t>(mesh.num_elements());
  if (bounds.size() != nt) throw ProblemError("bounds size does not match the element count");

  std::vector<double> velocity_reaction(nt), velocity_diffusion(nt), divergence(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const auto& b = bounds[k];
    velocity_reaction[k] = over_sqrt_reaction(b.C_w, b.c_wr);
    velocity_diffusion[k] = mesh.element(static_cast<Index>(k)).diameter * b.C_w / std::sqrt(b.c_S);
    divergence[k] = over_sqrt_reaction(b.C_divw, b.c_wr);
  }

  PatchQuantities q;
  q.edge_diffusion_max.assign(ne, 0.0);
  q.edge_velocity_reaction.assign(ne, 0.0);
  q.edge_velocity_diffusion.assign(ne, 0.0);
  q.edge_convection.assign(ne, 0.0);
  q.element_reaction_max.assign(nt, 0.0);
  q.element_divergence.assign(nt, 0.0);

  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const auto i = static_cast<std::size_t>(e);
    for (Index k : mesh.edge_vertex_patch(e)) {
      const auto j = static_cast<std::size_t>(k);
      q.edge_diffusion_max[i] = std::max(q.edge_diffusion_max[i], bounds[j].C_S);
      q.edge_velocity_reaction[i] = std::max(q.edge_velocity_reaction[i], velocity_reaction[j]);
      q.edge_velocity_diffusion[i] = std::max(q.edge_velocity_diffusion[i], velocity_diffusion[j]);
    }
    q.edge_convection[i] = std::min(q.edge_velocity_reaction[i], q.edge_velocity_diffusion[i]);
  }
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    for (Index n : mesh.element_vertex_patch(k)) {
      const auto j = static_cast<std::size_t>(n);
      q.element_reaction_max[i] = std::max(q.element_reaction_max[i], bounds[j].c_wr);
      q.element_divergence[i] = std::max(q.element_divergence[i], divergence[j]);
    }
  }
  return q;
}

std::vector<CoefficientBounds> ProblemData::element_bounds(const Triangulation& mesh) const {
  std::vector<CoefficientBounds> coarse;
  coarse.reserve(coefficients.size());
  for (const auto& c : coefficients) coarse.push_back(derive_bounds(c));
  std::vector<CoefficientBounds> out(static_cast<std::size_t>(mesh.num_elements()));
  for (Index k = 0; k < mesh.num_elements(); ++k)
    out[static_cast<std::size_t>(k)] = coarse.at(static_cast<std::size_t>(mesh.element(k).ancestor));
  return out;
}

bool ProblemData::pure_diffusion() const {
  return std::all_of(coefficients.begin(), coefficients.end(), [](const ElementCoefficients& c) {
    return c.w.isZero(0.0) && c.r == 0.0 && c.divw == 0.0;
  });
}

void ProblemData::validate() const {
  if (coefficients.empty()) throw ProblemError("problem '" + name + "' has no coefficients");
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    try {
      derive_bounds(coefficients[i]);
    } catch (const ProblemError& e) {
      throw ProblemError("coarse element " + std::to_string(i) + ": " + e.what());
    }
  }
  if (!source || !dirichlet) throw ProblemError("problem '" + name + "' lacks source or Dirichlet data");
}

double ProblemData::dirichlet_tangential_derivative(const Vec2& x, const Vec2& t, double step) const {
  if (dirichlet_gradient) return dirichlet_gradient(x).dot(t);
  const Vec2 d = step * t;
  return (-dirichlet(x + 2 * d) + 8 * dirichlet(x + d) - 8 * dirichlet(x - d) + dirichlet(x - 2 * d)) / (12 * step);
}

BenchmarkCase parse_benchmark(std::string_view name) {
  if (name == "lshape") return BenchmarkCase::lshape;
  if (name == "kellogg1") return BenchmarkCase::kellogg1;
  if (name == "kellogg2") return BenchmarkCase::kellogg2;
  if (name == "layer") return BenchmarkCase::layer;
  throw ProblemError("unknown benchmark '" + std::string(name) + "'");
}

std::string_view to_string(BenchmarkCase c) {
  switch (c) {
    case BenchmarkCase::lshape: return "lshape";
    case BenchmarkCase::kellogg1: return "kellogg1";
    case BenchmarkCase::kellogg2: return "kellogg2";
    case BenchmarkCase::layer: return "layer";
  }
  return "?";
}

const KelloggConstants& kellogg_constants(int which) {
  static const KelloggConstants case1{
      {5.0, 1.0, 5.0, 1.0},
      0.53544095,
      {0.44721360, -0.74535599, -0.94411759, -2.40170264},
      {1.00000000, 2.33333333, 0.55555555, -0.48148148}};
  static const KelloggConstants case2{
      {100.0, 1.0, 100.0, 1.0},
      0.12690207,
      {0.10000000, -9.60396040, -0.48035487, 7.70156488},
      {1.00000000, 2.96039604, -0.88275659, -6.45646175}};
  if (which == 1) return case1;
  if (which == 2) return case2;
  throw ProblemError("Kellogg case must be 1 or 2");
}

namespace {

double polar_angle(const Vec2& x) {
  double theta = std::atan2(x.y(), x.x());
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  return theta;
}

}  // namespace

int quadrant_of(const Vec2& x) {
  const int q = static_cast<int>(polar_angle(x) / (0.5 * std::numbers::pi));
  return std::clamp(q, 0, 3);
}

namespace {

Benchmark make_lshape() {
  Benchmark b;
  b.id = BenchmarkCase::lshape;
  b.mesh = build_initial_mesh(Domain::lshape);
  b.problem.name = "lshape";
  b.problem.coefficients.assign(static_cast<std::size_t>(b.mesh.num_elements()), ElementCoefficients{});
  b.exact.p = [](const Vec2& x) {
    const double rho = x.norm();
    if (rho == 0.0) return 0.0;
    return std::pow(rho, 2.0 / 3.0) * std::sin(2.0 * polar_angle(x) / 3.0);
  };
  b.exact.grad_p = [](const Vec2& x) -> Vec2 {
    const double rho = x.norm();
    if (rho == 0.0) return Vec2::Zero();
    const double theta = polar_angle(x);
    const double dr = (2.0 / 3.0) * std::pow(rho, -1.0 / 3.0) * std::sin(2.0 * theta / 3.0);
    const double dt = (2.0 / 3.0) * std::pow(rho, -1.0 / 3.0) * std::cos(2.0 * theta / 3.0);
    const Vec2 er = x / rho;
    return dr * er + dt * Vec2(-er.y(), er.x());
  };
  b.problem.source = [](const Vec2&) { return 0.0; };
  b.problem.dirichlet = b.exact.p;
  b.problem.dirichlet_gradient = b.exact.grad_p;
  b.problem.neumann_flux = [](const Vec2&) { return 0.0; };
  b.problem.is_neumann = [](const Vec2&) { return false; };
  return b;
}

Benchmark make_kellogg(int which) {
  const KelloggConstants& kc = kellogg_constants(which);
  Benchmark b;
  b.id = which == 1 ? BenchmarkCase::kellogg1 : BenchmarkCase::kellogg2;
  b.mesh = build_initial_mesh(Domain::square2x2);
  b.problem.name = std::string(to_string(b.id));
  for (Index k = 0; k < b.mesh.num_elements(); ++k) {
    ElementCoefficients c;
    c.S = kc.s[static_cast<std::size_t>(quadrant_of(b.mesh.centroid(k)))] * Mat2::Identity();
    b.problem.coefficients.push_back(c);
  }
  b.exact.p = [kc](const Vec2& x) {
    const double rho = x.norm();
    if (rho == 0.0) return 0.0;
    const double theta = polar_angle(x);
    const auto i = static_cast<std::size_t>(quadrant_of(x));
    return std::pow(rho, kc.alpha) * (kc.a[i] * std::sin(kc.alpha * theta) + kc.b[i] * std::cos(kc.alpha * theta));
  };
  b.exact.grad_p = [kc](const Vec2& x) -> Vec2 {
    const double rho = x.norm();
    if (rho == 0.0) return Vec2::Zero();
    const double theta = polar_angle(x);
    const auto i = static_cast<std::size_t>(quadrant_of(x));
    const double sn = std::sin(kc.alpha * theta);
    const double cs = std::cos(kc.alpha * theta);
    const double scale = kc.alpha * std::pow(rho, kc.alpha - 1.0);
    const double dr = scale * (kc.a[i] * sn + kc.b[i] * cs);
    const double dt = scale * (kc.a[i] * cs - kc.b[i] * sn);
    const Vec2 er = x / rho;
    return dr * er + dt * Vec2(-er.y(), er.x());
  };
  b.problem.source = [](const Vec2&) { return 0.0; };
  b.problem.dirichlet = b.exact.p;
  b.problem.dirichlet_gradient = b.exact.grad_p;
  b.problem.neumann_flux = [](const Vec2&) { return 0.0; };
  b.problem.is_neumann = [](const Vec2&) { return false; };
  return b;
}

Benchmark make_layer(const BenchmarkParams& params) {
  if (!(params.eps > 0.0)) throw ProblemError("layer benchmark needs eps > 0");
  if (!(params.a > 0.0)) throw ProblemError("layer benchmark needs a > 0");
  const double eps = params.eps;
  const double a = params.a;
  Benchmark b;
  b.id = BenchmarkCase::layer;
  auto is_top = [](const Vec2& x) { return std::abs(x.y() - 1.0) < 1e-12; };
  b.mesh = build_initial_mesh(Domain::unit_square).with_neumann(is_top);
  b.problem.name = "layer";
  ElementCoefficients c;
  c.S = eps * Mat2::Identity();
  c.w = Vec2(0.0, 1.0);
  c.r = 1.0;
  b.problem.coefficients.assign(static_cast<std::size_t>(b.mesh.num_elements()), c);
  b.exact.p = [a](const Vec2& x) { return 0.5 * (1.0 - std::tanh((0.5 - x.x()) / a)); };
  b.exact.grad_p = [a](const Vec2& x) -> Vec2 {
    const double ch = std::cosh((0.5 - x.x()) / a);
    return Vec2(0.5 / (a * ch * ch), 0.0);
  };
  // -eps p_xx + w . grad p + r p with w . grad p = p_y = 0 and r = 1
  b.problem.source = [eps, a](const Vec2& x) {
    const double z = (0.5 - x.x()) / a;
    const double ch = std::cosh(z);
    const double pxx = std::tanh(z) / (ch * ch * a * a);
    return -eps * pxx + 0.5 * (1.0 - std::tanh(z));
  };
  b.problem.dirichlet = b.exact.p;
  b.problem.dirichlet_gradient = b.exact.grad_p;
  b.problem.neumann_flux = [](const Vec2&) { return 0.0; };
  b.problem.is_neumann = is_top;
  return b;
}

}  // namespace

Benchmark benchmark(BenchmarkCase id, const BenchmarkParams& params) {
  Benchmark b;
  switch (id) {
    case BenchmarkCase::lshape: b = make_lshape(); break;
    case BenchmarkCase::kellogg1: b = make_kellogg(1); break;
    case BenchmarkCase::kellogg2: b = make_kellogg(2); break;
    case BenchmarkCase::layer: b = make_layer(params); break;
  }
  b.problem.validate();
  return b;
}

}  // namespace rtadapt
