#pragma once

#include "rtadapt/adapt.hpp"
#include "rtadapt/problem.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rtadapt {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  BenchmarkCase benchmark = BenchmarkCase::lshape;
  BenchmarkParams params;
  Scheme scheme = Scheme::centered;
  IndicatorPolicy policy = IndicatorPolicy::theorem;
  double theta = 0.5;
  RefinementMode mode = RefinementMode::adaptive;
  std::size_t max_dof = 100000;
  int max_iter = 1000;
  std::string out = "out";

  LoopOptions loop_options() const;
  bool operator==(const RunConfig&) const = default;
};

/// Ordered key/value pairs; keys are the long flag names without dashes
/// (benchmark, scheme, policy, theta, mode, max-dof, max-iter, eps, a, out).
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// key=value lines, `#` starts a comment. Unknown keys, lines without `=` and
/// repeated keys are errors naming the line.
ConfigEntries parse_config_text(std::string_view text);

/// Entries of `overrides` replace those of `base` with the same key.
ConfigEntries merge_entries(ConfigEntries base, const ConfigEntries& overrides);

/// Fills benchmark defaults (theta, scheme, policy) and validates ranges.
RunConfig resolve_config(const ConfigEntries& entries);

RunConfig parse_config(std::string_view text);

/// Writes every setting explicitly; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

/// Defaults for a benchmark: lshape theta 0.5 centred/theorem, kellogg1 0.7
/// and kellogg2 0.94 centred/xi, layer 0.5 upwind/theorem.
RunConfig benchmark_defaults(BenchmarkCase id);

}  // namespace rtadapt
