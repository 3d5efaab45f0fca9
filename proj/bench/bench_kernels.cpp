#include <benchmark/benchmark.h>

#include "rtadapt/estimators.hpp"
#include "rtadapt/solver.hpp"
#include "rtadapt/verify.hpp"

#include <map>

using namespace rtadapt;

namespace {

struct Fixture {
  Benchmark bm;
  Triangulation mesh;
  SaddleSystem system;
  MixedSolution solution;
};

// Layer benchmark on a uniformly refined mesh; levels set the size.
const Fixture& fixture(int levels) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(levels);
  if (it != cache.end()) return it->second;
  Fixture f{rtadapt::benchmark(BenchmarkCase::layer, {1e-2, 0.1}), {}, {}, {}};
  f.mesh = f.bm.mesh;
  for (int i = 0; i < levels; ++i) f.mesh = uniform_refine(f.mesh);
  f.system = assemble_upwind(f.mesh, f.bm.problem);
  f.solution = solve(f.system);
  return cache.emplace(levels, std::move(f)).first->second;
}

void BM_estimate(benchmark::State& s) {
  const auto& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(estimate(f.mesh, f.bm.problem, f.solution, IndicatorPolicy::xi));
  s.SetItemsProcessed(s.iterations() * f.mesh.num_elements());
}

void BM_estimate_serial(benchmark::State& s) {
  const auto& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s)
    benchmark::DoNotOptimize(estimate_serial(f.mesh, f.bm.problem, f.solution, IndicatorPolicy::xi));
  s.SetItemsProcessed(s.iterations() * f.mesh.num_elements());
}

void BM_energy_error(benchmark::State& s) {
  const auto& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(energy_error_sq(f.mesh, f.bm.problem, f.bm.exact, f.solution));
  s.SetItemsProcessed(s.iterations() * f.mesh.num_elements());
}

void BM_energy_error_serial(benchmark::State& s) {
  const auto& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s)
    benchmark::DoNotOptimize(energy_error_sq_serial(f.mesh, f.bm.problem, f.bm.exact, f.solution));
  s.SetItemsProcessed(s.iterations() * f.mesh.num_elements());
}

void BM_multiply(benchmark::State& s) {
  const auto& f = fixture(static_cast<int>(s.range(0)));
  const auto& A = f.system.matrix;
  std::vector<double> x(A.cols(), 1.0), y(A.rows());
  for (auto _ : s) {
    A.multiply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<std::int64_t>(A.nonzeros()));
}

void BM_multiply_serial(benchmark::State& s) {
  const auto& f = fixture(static_cast<int>(s.range(0)));
  const auto& A = f.system.matrix;
  std::vector<double> x(A.cols(), 1.0), y(A.rows());
  for (auto _ : s) {
    A.multiply_serial(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<std::int64_t>(A.nonzeros()));
}

}  // namespace

BENCHMARK(BM_estimate)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_estimate_serial)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_energy_error)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_energy_error_serial)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_multiply)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_multiply_serial)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
