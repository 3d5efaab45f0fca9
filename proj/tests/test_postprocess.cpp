#include <doctest.h>

#include "oracle.hpp"
#include "rtadapt/postprocess.hpp"
#include "rtadapt/quadrature.hpp"
#include "rtadapt/solver.hpp"

#include <random>

using namespace rtadapt;

namespace {

// Pure diffusion with constant S on the unit square and affine p, so the
// mixed solution is exact.
ProblemData affine_problem(const Mat2& S, const Vec2& g, double c0) {
  ProblemData pb;
  pb.name = "affine";
  ElementCoefficients c;
  c.S = S;
  pb.coefficients.assign(8, c);
  pb.source = [](const Vec2&) { return 0.0; };
  pb.dirichlet = [=](const Vec2& x) { return c0 + g.dot(x); };
  pb.dirichlet_gradient = [=](const Vec2&) { return g; };
  pb.neumann_flux = [](const Vec2&) { return 0.0; };
  pb.is_neumann = [](const Vec2&) { return false; };
  return pb;
}

MixedSolution constant_field(const Triangulation& m, const Vec2& v) {
  MixedSolution s;
  for (const auto& e : m.edges()) s.flux.push_back(v.dot(e.normal));
  s.pressure.assign(static_cast<std::size_t>(m.num_elements()), 0.0);
  return s;
}

}  // namespace

TEST_SUITE("postprocess") {
  TEST_CASE("quadratic from a zero field is constant") {
    const auto m = build_initial_mesh(Domain::unit_square);
    const auto q = build_ptilde(m, 2, AffineFlux{}, 1.5, Mat2::Identity());
    CHECK(q.value(Vec2(0.1, 0.7)) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(q.gradient(Vec2(0.3, 0.2)).norm() == 0.0);
  }

  TEST_CASE("unit diffusion with a constant flux") {
    const auto m = build_initial_mesh(Domain::unit_square);
    for (Index k = 0; k < m.num_elements(); ++k) {
      const auto q = build_ptilde(m, k, AffineFlux{Vec2(1, 0), 0.0}, 0.0, Mat2::Identity());
      const double xbar = m.centroid(k).x();
      for (const Vec2& x : {Vec2(0.2, 0.1), Vec2(0.7, 0.9)}) CHECK(q.value(x) == doctest::Approx(-x.x() + xbar).epsilon(1e-14));
    }
  }

  TEST_CASE("gradient and mean identities on random data") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> U(-1, 1);
    const auto m = uniform_refine(build_initial_mesh(Domain::square2x2));
    for (int t = 0; t < 100; ++t) {
      const Index k = static_cast<Index>(t % m.num_elements());
      Mat2 A;
      A << U(rng), U(rng), U(rng), U(rng);
      const Mat2 S = A * A.transpose() + 0.1 * Mat2::Identity();
      const AffineFlux u{Vec2(U(rng), U(rng)), U(rng)};
      const double pK = U(rng);
      const auto q = build_ptilde(m, k, u, pK, S);
      const auto c = m.corners(k);
      const double mean = oracle::triangle(oracle::corners(m, k), 3, [&](const Vec2& x) { return q.value(x); }) /
                          m.element(k).area;
      CHECK(std::abs(mean - pK) <= 1e-12);
      const auto& rule = seven_point_rule();
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const Vec2 x = rule.map(i, c);
        CHECK((S * q.gradient(x) + u(x)).norm() <= 1e-12 * (1 + u(x).norm()));
      }
    }
  }

  TEST_CASE("no jump for a globally constant field") {
    const auto m = uniform_refine(build_initial_mesh(Domain::square2x2));
    const auto pb = affine_problem(Mat2::Identity(), Vec2(0, 0), 0);
    const auto sol = constant_field(m, Vec2(0.4, -1.3));
    const auto f = weighted_flux(m, pb, sol, FluxWeight::inverse);
    for (Index e = 0; e < m.num_edges(); ++e) {
      const auto& ed = m.edge(e);
      if (!ed.is_boundary()) {
        CHECK(tangential_jump_sq(m, f, e) <= 1e-28);
        continue;
      }
      // One-sided trace on the boundary.
      const Vec2 A = m.vertex(ed.vertices[0]), B = m.vertex(ed.vertices[1]);
      const Vec2 t = (B - A).normalized();
      CHECK(tangential_jump_sq(m, f, e) == doctest::Approx(std::pow(t.dot(Vec2(0.4, -1.3)), 2) * ed.length));
    }
  }

  TEST_CASE("jumps against the ten-point oracle") {
    for (unsigned seed : {1u, 2u, 3u}) {
      const auto rc = oracle::random_case(seed, Scheme::centered);
      const auto& m = rc.mesh;
      for (auto weight : {FluxWeight::inverse, FluxWeight::inverse_sqrt}) {
        const auto f = weighted_flux(m, rc.problem, rc.solution, weight);
        for (Index e = 0; e < m.num_edges(); ++e) {
          const auto& ed = m.edge(e);
          const Vec2 A = m.vertex(ed.vertices[0]), B = m.vertex(ed.vertices[1]);
          const Vec2 t = (B - A).normalized();
          auto W = [&](Index k) {
            const Mat2& S = rc.problem.on(m, k).S;
            return weight == FluxWeight::inverse ? Mat2(S.inverse()) : oracle::inv_sqrt(S);
          };
          const Index K = ed.elements[0];
          const auto uK = oracle::rt0(m, K, rc.solution.flux);
          double o;
          if (ed.is_boundary()) {
            o = oracle::segment(A, B, 10, [&](const Vec2& x) { return std::pow(t.dot(W(K) * uK(x)), 2); });
          } else {
            const Index L = ed.elements[1];
            const auto uL = oracle::rt0(m, L, rc.solution.flux);
            o = oracle::segment(A, B, 10, [&](const Vec2& x) { return std::pow(t.dot(W(K) * uK(x) - W(L) * uL(x)), 2); });
          }
          CHECK(oracle::close(tangential_jump_sq(m, f, e), o, 1e-12, 1e-15));
        }
      }
    }
  }

  TEST_CASE("scaled jump") {
    const auto m = uniform_refine(build_initial_mesh(Domain::unit_square));
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> U(-1, 1);
    MixedSolution sol;
    for (Index e = 0; e < m.num_edges(); ++e) sol.flux.push_back(U(rng));
    sol.pressure.assign(static_cast<std::size_t>(m.num_elements()), 0.0);
    const auto unit = affine_problem(Mat2::Identity(), Vec2(0, 0), 0);
    const auto four = affine_problem(4 * Mat2::Identity(), Vec2(0, 0), 0);
    const auto fi = weighted_flux(m, unit, sol, FluxWeight::inverse);
    const auto fs = weighted_flux(m, unit, sol, FluxWeight::inverse_sqrt);
    const auto gi = weighted_flux(m, four, sol, FluxWeight::inverse);
    const auto gs = weighted_flux(m, four, sol, FluxWeight::inverse_sqrt);
    for (Index e = 0; e < m.num_edges(); ++e) {
      CHECK(tangential_jump_sq(m, fi, e) == doctest::Approx(tangential_jump_sq(m, fs, e)).epsilon(1e-14));
      CHECK(tangential_jump_sq(m, gs, e) == doctest::Approx(4 * tangential_jump_sq(m, gi, e)).epsilon(1e-12));
    }
    const auto zero = constant_field(m, Vec2(0, 0));
    for (Index e = 0; e < m.num_edges(); ++e) {
      CHECK(tangential_jump_sq(m, unit, zero, e) == 0.0);
      CHECK(tangential_jump_sq_scaled(m, unit, zero, e) == 0.0);
    }
  }

  TEST_CASE("data-corrected boundary jumps vanish for the exact flux") {
    Mat2 aniso;
    aniso << 2.0, 0.5, 0.5, 1.0;
    const Vec2 g(0.7, -0.4);
    for (const Mat2& S : {aniso, Mat2(3 * Mat2::Identity())}) {
      const auto pb = affine_problem(S, g, 0.25);
      const auto m = uniform_refine(build_initial_mesh(Domain::unit_square)).with_neumann(pb.is_neumann);
      const auto sol = solve(assemble_centered(m, pb));
      const Vec2 u = -(S * g);
      for (Index e = 0; e < m.num_edges(); ++e) {
        CHECK(std::abs(sol.flux[e] - u.dot(m.edge(e).normal)) <= 1e-12);
        CHECK(tangential_jump_sq(m, pb, sol, e) <= 1e-24);
        if (S(0, 1) == 0) CHECK(tangential_jump_sq_scaled(m, pb, sol, e) <= 1e-24);
      }
    }
    // Neumann sides carry no jump.
    const auto lay = benchmark(BenchmarkCase::layer);
    const auto sol = solve(assemble_upwind(lay.mesh, lay.problem));
    for (Index e = 0; e < lay.mesh.num_edges(); ++e)
      if (lay.mesh.edge(e).flag == BoundaryFlag::neumann) CHECK(tangential_jump_sq(lay.mesh, lay.problem, sol, e) == 0.0);
  }

  TEST_CASE("edge means of the postprocessed variable are continuous") {
    for (auto id : {BenchmarkCase::lshape, BenchmarkCase::kellogg1}) {
      const auto bm = benchmark(id);
      const auto m = refine(uniform_refine(uniform_refine(bm.mesh)), std::vector<Index>{0, 5, 9});
      const auto sol = solve(assemble_centered(m, bm.problem));
      const auto pt = postprocess(m, bm.problem, sol);
      for (Index e = 0; e < m.num_edges(); ++e) {
        const auto& ed = m.edge(e);
        if (ed.is_boundary()) continue;
        const Vec2 A = m.vertex(ed.vertices[0]), B = m.vertex(ed.vertices[1]);
        const double a = oracle::segment(A, B, 3, [&](const Vec2& x) { return pt[ed.elements[0]].value(x); });
        const double b = oracle::segment(A, B, 3, [&](const Vec2& x) { return pt[ed.elements[1]].value(x); });
        CHECK(std::abs(a - b) <= 1e-8 * std::max(std::abs(a), ed.length));
      }
    }
  }

  TEST_CASE("nodal average") {
    const auto m = build_initial_mesh(Domain::unit_square);
    std::vector<ElementQuadratic> pt;
    for (Index k = 0; k < m.num_elements(); ++k) pt.push_back(build_ptilde(m, k, AffineFlux{}, 2.0 + k, Mat2::Identity()));
    const auto nodal = nodal_average(m, pt);
    for (Index v = 0; v < m.num_vertices(); ++v) {
      double mean = 0;
      for (Index k : m.elements_at_vertex(v)) mean += 2.0 + k;
      mean /= static_cast<double>(m.elements_at_vertex(v).size());
      CHECK(nodal[v] == doctest::Approx(mean));
    }
  }
}
