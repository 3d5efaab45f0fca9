#include "rtadapt/verify.hpp"

#include "rtadapt/quadrature.hpp"

#include <cmath>
#include <limits>

namespace rtadapt {

namespace {

double element_error_sq(const Triangulation& mesh, const ProblemData& problem, const ExactSolution& exact,
                        const MixedSolution& solution, Index k) {
  const ElementCoefficients& c = problem.on(mesh, k);
  const CoefficientBounds b = derive_bounds(c);
  const Mat2 H = inverse_sqrt_spd(c.S);
  const AffineFlux uh = solution.on(mesh, k);
  const double ph = solution.pressure[static_cast<std::size_t>(k)];
  const Element& el = mesh.element(k);
  return integrate(seven_point_rule(), mesh.corners(k), el.area, [&](const Vec2& x) {
    const Vec2 d = H * (exact.flux(x, c.S) - uh(x));
    double v = d.squaredNorm();
    if (b.c_wr > 0.0) {
      const double dp = exact.p(x) - ph;
      v += b.c_wr * dp * dp;
    }
    return v;
  });
}

std::vector<double> run(const Triangulation& mesh, const ProblemData& problem, const ExactSolution& exact,
                        const MixedSolution& solution, bool parallel) {
  std::vector<double> out(static_cast<std::size_t>(mesh.num_elements()));
#pragma omp parallel for schedule(static) if (parallel)
  for (Index k = 0; k < mesh.num_elements(); ++k)
    out[static_cast<std::size_t>(k)] = element_error_sq(mesh, problem, exact, solution, k);
  return out;
}

}  // namespace

std::vector<double> energy_error_sq(const Triangulation& mesh, const ProblemData& problem,
                                    const ExactSolution& exact, const MixedSolution& solution) {
  return run(mesh, problem, exact, solution, true);
}

std::vector<double> energy_error_sq_serial(const Triangulation& mesh, const ProblemData& problem,
                                           const ExactSolution& exact, const MixedSolution& solution) {
  return run(mesh, problem, exact, solution, false);
}

double energy_error(const Triangulation& mesh, const ProblemData& problem, const ExactSolution& exact,
                    const MixedSolution& solution) {
  double s = 0.0;
  for (double v : energy_error_sq(mesh, problem, exact, solution)) s += v;
  return std::sqrt(s);
}

double eoc(double e_prev, double e_cur, std::size_t dof_prev, std::size_t dof_cur) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!(e_prev > 0.0) || !(e_cur > 0.0) || !std::isfinite(e_prev) || !std::isfinite(e_cur)) return nan;
  if (dof_prev == 0 || dof_cur == dof_prev) return nan;
  return std::log(e_prev / e_cur) /
         std::log(static_cast<double>(dof_cur) / static_cast<double>(dof_prev));
}

double effectivity(double eta, double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy) || !std::isfinite(eta)) return std::numeric_limits<double>::quiet_NaN();
  return eta / energy;
}

}  // namespace rtadapt
