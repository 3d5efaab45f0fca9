#include "rtadapt/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace rtadapt {

namespace {

constexpr std::array<std::string_view, 10> known_keys = {"benchmark", "scheme", "policy", "theta", "mode",
                                                         "max-dof",   "max-iter", "eps", "a", "out"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError("malformed value '" + value + "' for " + key);
  return v;
}

long long to_integer(const std::string& key, const std::string& value) {
  long long v = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("malformed value '" + value + "' for " + key);
  return v;
}

template <class F>
auto named(const std::string& key, const std::string& value, F parse) {
  try {
    return parse(value);
  } catch (const std::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

std::string fmt(double v) {
  // Shortest text that reads back to the same double.
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

LoopOptions RunConfig::loop_options() const {
  LoopOptions o;
  o.scheme = scheme;
  o.policy = policy;
  o.theta = theta;
  o.mode = mode;
  o.max_dof = max_dof;
  o.max_iter = max_iter;
  return o;
}

RunConfig benchmark_defaults(BenchmarkCase id) {
  RunConfig c;
  c.benchmark = id;
  switch (id) {
    case BenchmarkCase::lshape:
      c.theta = 0.5;
      break;
    case BenchmarkCase::kellogg1:
      c.theta = 0.7;
      c.policy = IndicatorPolicy::xi;
      break;
    case BenchmarkCase::kellogg2:
      c.theta = 0.94;
      c.policy = IndicatorPolicy::xi;
      break;
    case BenchmarkCase::layer:
      c.theta = 0.5;
      c.scheme = Scheme::upwind;
      break;
  }
  return c;
}

ConfigEntries parse_config_text(std::string_view text) {
  ConfigEntries out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key=value, got '" + std::string(line) + "'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end())
      throw ConfigError(where + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    if (std::any_of(out.begin(), out.end(), [&](const auto& kv) { return kv.first == key; }))
      throw ConfigError(where + ": conflicting second entry for '" + key + "'");
    out.emplace_back(key, value);
  }
  return out;
}

ConfigEntries merge_entries(ConfigEntries base, const ConfigEntries& overrides) {
  for (const auto& [key, value] : overrides) {
    auto it = std::find_if(base.begin(), base.end(), [&](const auto& kv) { return kv.first == key; });
    if (it != base.end())
      it->second = value;
    else
      base.emplace_back(key, value);
  }
  return base;
}

RunConfig resolve_config(const ConfigEntries& entries) {
  std::map<std::string, std::string> kv;
  for (const auto& [key, value] : entries) {
    if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end())
      throw ConfigError("unknown key '" + key + "'");
    kv[key] = value;
  }
  BenchmarkCase id = BenchmarkCase::lshape;
  if (auto it = kv.find("benchmark"); it != kv.end()) id = named(it->first, it->second, parse_benchmark);
  RunConfig c = benchmark_defaults(id);

  for (const auto& [key, value] : kv) {
    if (key == "benchmark") continue;
    if (key == "scheme") {
      c.scheme = named(key, value, parse_scheme);
    } else if (key == "policy") {
      c.policy = named(key, value, parse_policy);
    } else if (key == "mode") {
      c.mode = named(key, value, parse_mode);
    } else if (key == "theta") {
      c.theta = to_double(key, value);
      if (!(c.theta > 0.0 && c.theta <= 1.0)) throw ConfigError("theta=" + value + " is outside (0, 1]");
    } else if (key == "max-dof") {
      const auto v = to_integer(key, value);
      if (v < 1) throw ConfigError("max-dof=" + value + " must be positive");
      c.max_dof = static_cast<std::size_t>(v);
    } else if (key == "max-iter") {
      const auto v = to_integer(key, value);
      if (v < 1 || v > 100000) throw ConfigError("max-iter=" + value + " must lie in [1, 100000]");
      c.max_iter = static_cast<int>(v);
    } else if (key == "eps" || key == "a") {
      if (id != BenchmarkCase::layer) throw ConfigError(key + " conflicts with benchmark " + std::string(to_string(id)));
      const double v = to_double(key, value);
      if (!(v > 0.0)) throw ConfigError(key + "=" + value + " must be positive");
      (key == "eps" ? c.params.eps : c.params.a) = v;
    } else if (key == "out") {
      c.out = value;
    }
  }
  return c;
}

RunConfig parse_config(std::string_view text) { return resolve_config(parse_config_text(text)); }

std::string render_config(const RunConfig& c) {
  std::ostringstream out;
  out << "benchmark=" << to_string(c.benchmark) << '\n';
  out << "scheme=" << to_string(c.scheme) << '\n';
  out << "policy=" << to_string(c.policy) << '\n';
  out << "theta=" << fmt(c.theta) << '\n';
  out << "mode=" << to_string(c.mode) << '\n';
  out << "max-dof=" << c.max_dof << '\n';
  out << "max-iter=" << c.max_iter << '\n';
  if (c.benchmark == BenchmarkCase::layer) {
    out << "eps=" << fmt(c.params.eps) << '\n';
    out << "a=" << fmt(c.params.a) << '\n';
  }
  out << "out=" << c.out << '\n';
  return out.str();
}

}  // namespace rtadapt
