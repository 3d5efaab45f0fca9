#include "rtadapt/adapt.hpp"

#include "rtadapt/solver.hpp"
#include "rtadapt/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rtadapt {

std::vector<Index> dorfler_mark(std::span<const double> indicators, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  double total = 0.0;
  for (double v : indicators) {
    if (!(v >= 0.0)) throw std::invalid_argument("indicators must be non-negative");
    total += v * v;
  }
  if (total == 0.0) return {};
  std::vector<Index> order(indicators.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return indicators[static_cast<std::size_t>(a)] > indicators[static_cast<std::size_t>(b)];
  });
  // A few ulps of slack so that rounding in theta^2 * total cannot force an
  // extra element when a prefix reaches the threshold exactly.
  const double target = theta * theta * total * (1.0 - 8.0 * std::numeric_limits<double>::epsilon());
  double acc = 0.0;
  std::size_t n = 0;
  while (n < order.size() && acc < target) {
    const double v = indicators[static_cast<std::size_t>(order[n])];
    if (v == 0.0) break;
    acc += v * v;
    ++n;
  }
  order.resize(n);
  return order;
}

RefinementMode parse_mode(std::string_view name) {
  if (name == "adaptive") return RefinementMode::adaptive;
  if (name == "uniform") return RefinementMode::uniform;
  throw std::invalid_argument("unknown refinement mode '" + std::string(name) + "'");
}

std::string_view to_string(RefinementMode m) { return m == RefinementMode::adaptive ? "adaptive" : "uniform"; }

LoopResult adaptive_loop(const Triangulation& initial, const ProblemData& problem, const ExactSolution* exact,
                         const LoopOptions& options, const IterationObserver& observer) {
  if (!(options.theta > 0.0 && options.theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be positive");
  using clock = std::chrono::steady_clock;

  LoopResult result{{}, initial, {}, {}, {}};
  Triangulation mesh = initial;
  if (static_cast<std::size_t>(mesh.num_elements()) > options.max_dof)
    throw std::invalid_argument("the initial mesh already exceeds max_dof");

  for (int k = 1;; ++k) {
    const auto start = clock::now();
    const SaddleSystem system = assemble(mesh, problem, options.scheme);
    MixedSolution solution = solve(system);
    std::vector<ElementQuadratic> ptilde = postprocess(mesh, problem, solution);
    EstimatorBreakdown est = estimate(mesh, problem, solution, options.policy);

    RunRecord rec;
    rec.k = k;
    rec.dof = static_cast<std::size_t>(mesh.num_elements());
    rec.energy_error =
        exact ? energy_error(mesh, problem, *exact, solution) : std::numeric_limits<double>::quiet_NaN();
    rec.totals = est.global();
    rec.eta = rec.totals.total;
    rec.wall_seconds = std::chrono::duration<double>(clock::now() - start).count();
    result.history.push_back(rec);

    if (observer) observer(IterationState{k, mesh, problem, solution, est, ptilde, result.history.back()});

    std::vector<Index> marked;
    if (options.mode == RefinementMode::uniform) {
      marked.resize(static_cast<std::size_t>(mesh.num_elements()));
      std::iota(marked.begin(), marked.end(), Index{0});
    } else {
      marked = dorfler_mark(est.total(), options.theta);
    }

    const bool last = k >= options.max_iter || marked.empty();
    std::optional<Triangulation> next;
    if (!last) {
      next = refine(mesh, marked);
      if (static_cast<std::size_t>(next->num_elements()) > options.max_dof) next.reset();
    }
    if (!next) {
      result.mesh = std::move(mesh);
      result.solution = std::move(solution);
      result.estimators = std::move(est);
      result.ptilde = std::move(ptilde);
      return result;
    }
    mesh = std::move(*next);
  }
}

}  // namespace rtadapt
