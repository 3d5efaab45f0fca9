#include "rtadapt/run.hpp"

#include "rtadapt/mesh_io.hpp"
#include "rtadapt/verify.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rtadapt {

const char* const history_header = "k,dof,E_k,eta_k,eta_D,eta_R,eta_NC,eta_C,eta_U,xi,EOC_E,EOC_eta,effectivity";

std::string format_number(double v) {
  if (!std::isfinite(v)) return "nan";
  // Shortest text that reads back to the same double.
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<double> eoc_series(std::span<const RunRecord> history, bool use_estimator) {
  std::vector<double> out;
  for (std::size_t i = 1; i < history.size(); ++i) {
    const auto& a = history[i - 1];
    const auto& b = history[i];
    out.push_back(use_estimator ? eoc(a.eta, b.eta, a.dof, b.dof)
                                : eoc(a.energy_error, b.energy_error, a.dof, b.dof));
  }
  return out;
}

void write_history_csv(std::ostream& out, std::span<const RunRecord> history) {
  out << "# marking: smallest set with sum of squared indicators >= theta^2 times the total\n";
  out << history_header << '\n';
  const auto eoc_e = eoc_series(history, false);
  const auto eoc_eta = eoc_series(history, true);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < history.size(); ++i) {
    const RunRecord& r = history[i];
    out << r.k << ',' << r.dof << ',' << format_number(r.energy_error) << ',' << format_number(r.eta) << ','
        << format_number(r.totals.eta_D) << ',' << format_number(r.totals.eta_R) << ','
        << format_number(r.totals.eta_NC) << ',' << format_number(r.totals.eta_C) << ','
        << format_number(r.totals.eta_U) << ',' << format_number(r.totals.xi) << ','
        << format_number(i ? eoc_e[i - 1] : nan) << ',' << format_number(i ? eoc_eta[i - 1] : nan) << ','
        << format_number(effectivity(r.eta, r.energy_error)) << '\n';
  }
}

void write_estimator_csv(std::ostream& out, const EstimatorBreakdown& est) {
  out << "element_id,eta_D,eta_R,eta_NC,eta_C,eta_U,xi,total\n";
  for (std::size_t k = 0; k < est.total2.size(); ++k) {
    out << k << ',' << format_number(std::sqrt(est.eta_D2[k])) << ',' << format_number(std::sqrt(est.eta_R2[k]))
        << ',' << format_number(std::sqrt(est.eta_NC2[k])) << ',' << format_number(std::sqrt(est.eta_C2[k])) << ','
        << format_number(std::sqrt(est.eta_U2[k])) << ',' << format_number(std::sqrt(est.xi2[k])) << ','
        << format_number(std::sqrt(est.total2[k])) << '\n';
  }
}

void write_nodal_csv(std::ostream& out, std::span<const double> values) {
  out << "vertex,value\n";
  for (std::size_t v = 0; v < values.size(); ++v) out << v << ',' << format_number(values[v]) << '\n';
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.exceptions(std::ios::badbit | std::ios::failbit);
  return f;
}

}  // namespace

LoopResult run_study(const RunConfig& config, std::ostream* log) {
  namespace fs = std::filesystem;
  const fs::path dir(config.out);
  fs::create_directories(dir);
  {
    auto f = open_output(dir / "config.txt");
    f << render_config(config);
  }
  const Benchmark bench = benchmark(config.benchmark, config.params);
  const IterationObserver observer = [&](const IterationState& s) {
    if (!log) return;
    *log << "k=" << s.record.k << " dof=" << s.record.dof << " E=" << format_number(s.record.energy_error)
         << " eta=" << format_number(s.record.eta) << " t=" << s.record.wall_seconds << "s\n";
  };
  LoopResult result = adaptive_loop(bench.mesh, bench.problem, &bench.exact, config.loop_options(), observer);

  {
    auto f = open_output(dir / "history.csv");
    write_history_csv(f, result.history);
  }
  {
    auto f = open_output(dir / "mesh_final.txt");
    write_mesh(f, result.mesh);
  }
  {
    auto f = open_output(dir / "mesh_final.svg");
    const auto total = result.estimators.total();
    write_svg(f, result.mesh, total);
  }
  {
    auto f = open_output(dir / "estimators_final.csv");
    write_estimator_csv(f, result.estimators);
  }
  if (config.benchmark == BenchmarkCase::layer) {
    auto f = open_output(dir / "ptilde_nodal.csv");
    write_nodal_csv(f, nodal_average(result.mesh, result.ptilde));
  }
  return result;
}

}  // namespace rtadapt
