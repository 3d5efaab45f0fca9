#pragma once

#include "rtadapt/assembly.hpp"
#include "rtadapt/estimators.hpp"
#include "rtadapt/postprocess.hpp"
#include "rtadapt/problem.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace rtadapt {

/// Smallest prefix of the elements sorted by indicator (descending, ties by
/// lower id) whose squared sum reaches theta^2 times the total squared sum.
/// Returned ids are in that order. Throws std::invalid_argument for theta
/// outside (0, 1] or a negative indicator.
std::vector<Index> dorfler_mark(std::span<const double> indicators, double theta);

enum class RefinementMode { adaptive, uniform };

RefinementMode parse_mode(std::string_view name);
std::string_view to_string(RefinementMode m);

struct LoopOptions {
  Scheme scheme = Scheme::centered;
  IndicatorPolicy policy = IndicatorPolicy::theorem;
  double theta = 0.5;
  RefinementMode mode = RefinementMode::adaptive;
  std::size_t max_dof = 100000;
  int max_iter = 1000;
};

struct RunRecord {
  int k = 0;
  std::size_t dof = 0;
  /// NaN when no exact solution is known.
  double energy_error = 0.0;
  double eta = 0.0;
  EstimatorBreakdown::Totals totals;
  double wall_seconds = 0.0;
};

/// Everything computed on one mesh of the loop, handed to an observer before
/// marking.
struct IterationState {
  int k = 0;
  const Triangulation& mesh;
  const ProblemData& problem;
  const MixedSolution& solution;
  const EstimatorBreakdown& estimators;
  const std::vector<ElementQuadratic>& ptilde;
  const RunRecord& record;
};

using IterationObserver = std::function<void(const IterationState&)>;

struct LoopResult {
  std::vector<RunRecord> history;
  Triangulation mesh;
  MixedSolution solution;
  EstimatorBreakdown estimators;
  std::vector<ElementQuadratic> ptilde;
};

/// Solve, estimate, record, mark, refine. A mesh is solved and recorded only
/// while its element count is at most max_dof; the loop also stops after
/// max_iter records or when nothing is marked. The final state is the last
/// recorded one.
LoopResult adaptive_loop(const Triangulation& initial, const ProblemData& problem, const ExactSolution* exact,
                         const LoopOptions& options, const IterationObserver& observer = {});

}  // namespace rtadapt
