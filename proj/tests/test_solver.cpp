#include <doctest.h>

#include "rtadapt/assembly.hpp"
#include "rtadapt/solver.hpp"

#include <random>

using namespace rtadapt;

TEST_SUITE("solver") {
  TEST_CASE("smallest mesh solves to tolerance") {
    const auto l = benchmark(BenchmarkCase::lshape);
    const auto sys = assemble_centered(l.mesh, l.problem);
    const auto x = solve_linear(sys.matrix, sys.rhs);
    CHECK(relative_residual(sys.matrix, x, sys.rhs) <= 1e-10);
    const auto sol = solve(sys);
    CHECK(sol.flux.size() == static_cast<std::size_t>(l.mesh.num_edges()));
    CHECK(sol.pressure.size() == static_cast<std::size_t>(l.mesh.num_elements()));
  }

  TEST_CASE("manufactured solution is recovered") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> U(-1, 1);
    for (auto id : {BenchmarkCase::kellogg2, BenchmarkCase::layer}) {
      const auto bm = benchmark(id, {1e-3, 0.05});
      const auto m = uniform_refine(uniform_refine(uniform_refine(bm.mesh)));
      const auto sys = assemble(m, bm.problem, id == BenchmarkCase::layer ? Scheme::upwind : Scheme::centered);
      std::vector<double> x(sys.size()), b(sys.size());
      for (double& v : x) v = U(rng);
      sys.matrix.multiply(x, b);
      const auto y = solve_linear(sys.matrix, b);
      double err = 0, nx = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        err += (y[i] - x[i]) * (y[i] - x[i]);
        nx += x[i] * x[i];
      }
      CHECK(std::sqrt(err / nx) <= 1e-10);
    }
  }

  TEST_CASE("zero row is reported") {
    const SparseMatrix A(3, 3, {{0, 0, 2.0}, {0, 1, 1.0}, {2, 2, 1.0}, {2, 0, 1.0}});
    const std::vector<double> b{1, 1, 1};
    try {
      solve_linear(A, b);
      FAIL("expected a solve error");
    } catch (const SolveError& e) {
      CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
    const SparseMatrix S(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(solve_linear(S, std::vector<double>{1, 2}), SolveError);
  }

  TEST_CASE("scaling and determinism") {
    const auto k = benchmark(BenchmarkCase::kellogg1);
    const auto m = uniform_refine(uniform_refine(k.mesh));
    const auto sys = assemble_centered(m, k.problem);
    const auto x = solve_linear(sys.matrix, sys.rhs);
    std::vector<double> b3 = sys.rhs;
    for (double& v : b3) v *= 3.0;
    const auto x3 = solve_linear(sys.matrix, b3);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x3[i] - 3 * x[i]) <= 1e-12 * (1 + std::abs(3 * x[i])));
    const auto again = solve_linear(sys.matrix, sys.rhs);
    CHECK(again == x);
  }

  TEST_CASE("sparse matrix") {
    const SparseMatrix A(2, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 3.0}, {1, 1, 0.0}});
    CHECK(A.nonzeros() == 3);
    CHECK(A.coeff(0, 2) == 4.0);
    CHECK(A.coeff(1, 0) == 0.0);
    const auto cols = A.column_indices();
    CHECK(cols[0] == 0);
    CHECK(cols[1] == 2);
    std::vector<double> y(2), ys(2);
    const std::vector<double> x{1, 2, 3};
    A.multiply(x, y);
    A.multiply_serial(x, ys);
    CHECK(y == ys);
    CHECK(y[0] == 14.0);
    CHECK_THROWS(SparseMatrix(2, 2, {{2, 0, 1.0}}));
  }
}
