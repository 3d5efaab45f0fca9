#include <doctest.h>

#include "rtadapt/mesh.hpp"
#include "rtadapt/mesh_io.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace rtadapt;

namespace {

bool contains(const Triangulation& m, Index k, const Vec2& x) {
  const auto c = m.corners(k);
  const double tol = 1e-12;
  return signed_area(c[0], c[1], x) >= -tol && signed_area(c[1], c[2], x) >= -tol &&
         signed_area(c[2], c[0], x) >= -tol;
}

// Edge-incidence audit independent of the stored edge table.
void audit_conformity(const Triangulation& m) {
  std::map<std::pair<Index, Index>, int> count;
  for (const auto& el : m.elements())
    for (int i = 0; i < 3; ++i) {
      Index a = el.vertices[(i + 1) % 3], b = el.vertices[(i + 2) % 3];
      if (a > b) std::swap(a, b);
      ++count[{a, b}];
    }
  for (const auto& [key, n] : count) {
    CHECK(n <= 2);
    if (n == 1) {
      // A boundary side must not contain another vertex in its interior.
      const Vec2 A = m.vertex(key.first), B = m.vertex(key.second);
      for (Index v = 0; v < m.num_vertices(); ++v) {
        if (v == key.first || v == key.second) continue;
        const Vec2 P = m.vertex(v);
        const double t = (P - A).dot(B - A) / (B - A).squaredNorm();
        const bool on = std::abs(cross(B - A, P - A)) < 1e-12 && t > 1e-12 && t < 1 - 1e-12;
        CHECK_FALSE(on);
      }
    }
  }
  CHECK(static_cast<Index>(count.size()) == m.num_edges());
  CHECK_NOTHROW(m.check_conformity());
}

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("initial meshes") {
    const auto l = build_initial_mesh(Domain::lshape);
    CHECK(l.num_elements() == 6);
    CHECK(l.num_vertices() == 8);
    CHECK(l.total_area() == doctest::Approx(3.0).epsilon(1e-15));
    Index origin = invalid_index;
    for (Index v = 0; v < l.num_vertices(); ++v)
      if (l.vertex(v).norm() == 0.0) origin = v;
    REQUIRE(origin != invalid_index);
    // Every element meeting the origin has it as a vertex.
    for (Index k = 0; k < l.num_elements(); ++k) {
      const auto& vs = l.element(k).vertices;
      if (contains(l, k, Vec2::Zero())) CHECK(std::find(vs.begin(), vs.end(), origin) != vs.end());
    }
    CHECK(l.elements_at_vertex(origin).size() == 6);

    const auto s = build_initial_mesh(Domain::square2x2);
    CHECK(s.num_elements() == 8);
    CHECK(s.total_area() == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(s.min_angle() == doctest::Approx(M_PI / 4));

    const auto u = build_initial_mesh(Domain::unit_square);
    CHECK(u.num_elements() == 8);
    CHECK(u.total_area() == doctest::Approx(1.0).epsilon(1e-15));
    for (const auto* m : {&l, &s, &u}) audit_conformity(*m);
  }

  TEST_CASE("every element in the square lies in one quadrant") {
    const auto s = build_initial_mesh(Domain::square2x2);
    for (Index k = 0; k < s.num_elements(); ++k) {
      const auto c = s.corners(k);
      for (int q = 0; q < 3; ++q) {
        CHECK(c[q].x() * s.centroid(k).x() >= 0);
        CHECK(c[q].y() * s.centroid(k).y() >= 0);
      }
    }
  }

  TEST_CASE("edge orientation and element signs") {
    const auto m = uniform_refine(build_initial_mesh(Domain::lshape));
    for (const auto& e : m.edges()) {
      CHECK(e.vertices[0] < e.vertices[1]);
      const Vec2 d = m.vertex(e.vertices[1]) - m.vertex(e.vertices[0]);
      CHECK(e.length == doctest::Approx(d.norm()));
      CHECK((e.normal - rotate_cw(d) / d.norm()).norm() < 1e-15);
      CHECK((e.elements[1] == invalid_index) == e.is_boundary());
    }
    for (Index k = 0; k < m.num_elements(); ++k) {
      const auto& el = m.element(k);
      CHECK(el.area > 0);
      CHECK(signed_area(m.vertex(el.vertices[0]), m.vertex(el.vertices[1]), m.vertex(el.vertices[2])) > 0);
      for (int i = 0; i < 3; ++i) {
        const Vec2 out = m.edge_midpoint(el.edges[i]) - m.centroid(k);
        CHECK(el.signs[i] * m.edge(el.edges[i]).normal.dot(out) > 0);
        // Local edge i is opposite local vertex i.
        const auto& ev = m.edge(el.edges[i]).vertices;
        CHECK(ev[0] != el.vertices[i]);
        CHECK(ev[1] != el.vertices[i]);
      }
    }
  }

  TEST_CASE("marking every element replaces each parent by two children") {
    const auto m = build_initial_mesh(Domain::unit_square);
    std::vector<Index> all(8);
    for (Index k = 0; k < 8; ++k) all[k] = k;
    const auto r = refine(m, all);
    CHECK(r.num_elements() == 16);
    for (Index a = 0; a < 8; ++a) {
      int children = 0;
      for (const auto& el : r.elements()) children += el.ancestor == a;
      CHECK(children == 2);
    }
    audit_conformity(r);
    CHECK(r.generation() == m.generation() + 1);
  }

  TEST_CASE("closure removes hanging nodes on a two-element square") {
    const Triangulation two({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}}, {0, 1});
    for (Index k = 0; k < 2; ++k) {
      const Index mark[] = {k};
      const auto r = refine(two, mark);
      CHECK(r.num_elements() == 4);
      audit_conformity(r);
      CHECK(r.total_area() == doctest::Approx(1.0).epsilon(1e-15));
    }
  }

  TEST_CASE("empty mark set keeps the mesh") {
    const auto m = uniform_refine(build_initial_mesh(Domain::lshape));
    const auto r = refine(m, {});
    CHECK(r.num_elements() == m.num_elements());
    CHECK(r.num_edges() == m.num_edges());
    for (Index k = 0; k < m.num_elements(); ++k) CHECK(r.element(k).vertices == m.element(k).vertices);
  }

  TEST_CASE("uniform refinement bisects every element and keeps angles") {
    auto m = build_initial_mesh(Domain::lshape);
    const auto r = uniform_refine(m);
    CHECK(r.num_elements() >= 2 * m.num_elements());
    auto u = build_initial_mesh(Domain::unit_square);
    const double angle0 = u.min_angle();
    for (int i = 0; i < 5; ++i) {
      const auto next = uniform_refine(u);
      CHECK(next.num_elements() > u.num_elements());
      u = next;
      CHECK(u.min_angle() >= angle0 - 1e-12);
      audit_conformity(u);
    }
  }

  TEST_CASE("random adaptive refinement: conformity, area, genealogy") {
    std::mt19937 rng(7);
    for (Domain d : {Domain::lshape, Domain::square2x2, Domain::unit_square}) {
      const auto coarse = build_initial_mesh(d);
      auto m = coarse;
      const double area = m.total_area();
      for (int step = 0; step < 8; ++step) {
        std::vector<Index> marked;
        std::bernoulli_distribution pick(0.2);
        for (Index k = 0; k < m.num_elements(); ++k)
          if (pick(rng)) marked.push_back(k);
        m = refine(m, marked);
        audit_conformity(m);
        CHECK(std::abs(m.total_area() - area) <= 1e-12 * area);
        CHECK(m.shape_constant() < 1e3);
      }
      for (Index k = 0; k < m.num_elements(); ++k) CHECK(contains(coarse, m.element(k).ancestor, m.centroid(k)));
      // Boundary flags survive refinement: every boundary edge lies on a
      // coarse boundary edge.
      for (const auto& e : m.edges()) {
        if (!e.is_boundary()) continue;
        const Vec2 mid = 0.5 * (m.vertex(e.vertices[0]) + m.vertex(e.vertices[1]));
        bool found = false;
        for (const auto& ce : coarse.edges()) {
          if (!ce.is_boundary()) continue;
          const Vec2 A = coarse.vertex(ce.vertices[0]), B = coarse.vertex(ce.vertices[1]);
          const double t = (mid - A).dot(B - A) / (B - A).squaredNorm();
          if (std::abs(cross(B - A, mid - A)) < 1e-12 && t > 0 && t < 1) found = ce.flag == e.flag;
        }
        CHECK(found);
      }
    }
  }

  TEST_CASE("edge patch") {
    const auto m = uniform_refine(build_initial_mesh(Domain::lshape));
    for (Index e = 0; e < m.num_edges(); ++e) {
      const auto p = m.edge_patch(e);
      CHECK(p.size() == (m.edge(e).is_boundary() ? 1u : 2u));
      for (Index k : p) {
        const auto& es = m.element(k).edges;
        CHECK(std::find(es.begin(), es.end(), e) != es.end());
      }
    }
    CHECK_THROWS(m.edge_patch(m.num_edges()));
  }

  TEST_CASE("vertex star") {
    const auto s = build_initial_mesh(Domain::square2x2);
    Index origin = invalid_index, corner = invalid_index;
    for (Index v = 0; v < s.num_vertices(); ++v) {
      if (s.vertex(v).norm() == 0) origin = v;
      if (s.vertex(v) == Vec2(1, 1)) corner = v;
    }
    const auto star = s.vertex_star(origin);
    CHECK_FALSE(star.boundary);
    CHECK(star.elements.size() == s.elements_at_vertex(origin).size());
    CHECK(s.vertex_star(corner).boundary);

    const auto fan = build_initial_mesh(Domain::unit_square);
    for (Index v = 0; v < fan.num_vertices(); ++v)
      if (fan.vertex(v) == Vec2(0.5, 0.5)) CHECK(fan.vertex_star(v).elements.size() == 8);

    auto shares_edge_at = [](const Triangulation& m, Index a, Index b, Index z) {
      for (Index e : m.element(a).edges) {
        const auto& ev = m.edge(e).vertices;
        const auto& be = m.element(b).edges;
        if ((ev[0] == z || ev[1] == z) && std::find(be.begin(), be.end(), e) != be.end()) return true;
      }
      return false;
    };
    const auto m = refine(uniform_refine(s), std::vector<Index>{0, 3, 5});
    for (Index z = 0; z < m.num_vertices(); ++z) {
      const auto st = m.vertex_star(z);
      CHECK(st.elements.size() == m.elements_at_vertex(z).size());
      const std::size_t n = st.elements.size();
      for (std::size_t i = 0; i + 1 < n; ++i) CHECK(shares_edge_at(m, st.elements[i], st.elements[i + 1], z));
      if (!st.boundary && n > 1) CHECK(shares_edge_at(m, st.elements[n - 1], st.elements[0], z));
    }
    CHECK_THROWS(m.vertex_star(-1));
  }

  TEST_CASE("vertex patches") {
    const auto m = uniform_refine(build_initial_mesh(Domain::square2x2));
    for (Index k = 0; k < m.num_elements(); ++k) {
      const auto p = m.element_vertex_patch(k);
      CHECK(std::find(p.begin(), p.end(), k) != p.end());
      std::set<Index> expect;
      for (Index v : m.element(k).vertices)
        for (Index j : m.elements_at_vertex(v)) expect.insert(j);
      CHECK(std::set<Index>(p.begin(), p.end()) == expect);
    }
    for (Index e = 0; e < m.num_edges(); ++e) {
      const auto p = m.edge_vertex_patch(e);
      std::set<Index> expect;
      for (Index v : m.edge(e).vertices)
        for (Index j : m.elements_at_vertex(v)) expect.insert(j);
      CHECK(std::set<Index>(p.begin(), p.end()) == expect);
    }
  }

  TEST_CASE("longest local edge") {
    const Triangulation t({{0, 0}, {2, 0}, {0, 1}}, {{0, 1, 2}}, {0});
    CHECK(longest_local_edge(t, 0) == 0);
    CHECK(t.element(0).diameter == doctest::Approx(std::sqrt(5.0)));
  }

  TEST_CASE("neumann reclassification") {
    const auto m = build_initial_mesh(Domain::unit_square).with_neumann([](const Vec2& x) { return x.y() == 1.0; });
    int neumann = 0;
    for (const auto& e : m.edges()) neumann += e.flag == BoundaryFlag::neumann;
    CHECK(neumann == 2);
    const auto r = uniform_refine(uniform_refine(m));
    double length = 0;
    for (const auto& e : r.edges())
      if (e.flag == BoundaryFlag::neumann) {
        length += e.length;
        CHECK(r.vertex(e.vertices[0]).y() == 1.0);
        CHECK(r.vertex(e.vertices[1]).y() == 1.0);
      }
    CHECK(length == doctest::Approx(1.0));
  }

  TEST_CASE("nonconforming input is rejected") {
    const std::vector<Vec2> v{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.5}};
    CHECK_THROWS_AS(Triangulation(v, {{0, 1, 2}, {1, 3, 4}, {4, 3, 2}}, {0, 1, 2}).check_conformity(), MeshError);
    CHECK_THROWS_AS(Triangulation({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}, {0}), MeshError);
    CHECK_THROWS(parse_domain("circle"));
  }
}

TEST_SUITE("mesh") {
  TEST_CASE("dump round trip") {
    const auto m = refine(uniform_refine(build_initial_mesh(Domain::lshape)), std::vector<Index>{1, 4});
    std::ostringstream a;
    write_mesh(a, m);
    std::istringstream in(a.str());
    const auto back = read_mesh(in);
    std::ostringstream b;
    write_mesh(b, back);
    CHECK(a.str() == b.str());
    CHECK(back.num_elements() == m.num_elements());
    for (Index v = 0; v < m.num_vertices(); ++v) CHECK(back.vertex(v) == m.vertex(v));
    for (Index e = 0; e < m.num_edges(); ++e) CHECK(back.edge(e).flag == m.edge(e).flag);
  }

  TEST_CASE("malformed dump") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_mesh(empty), MeshError);
    std::istringstream bad("3 3 1\n0 0 0\n1 1 0\n2 0 1\n0 0 1 dirichlet\n1 1 2 dirichlet\n2 0 2 dirichlet\n0 0 1 7 0 1 2 0\n");
    CHECK_THROWS_AS(read_mesh(bad), MeshError);
  }

  TEST_CASE("svg output") {
    const auto m = build_initial_mesh(Domain::unit_square);
    std::vector<double> ind(8, 0.0);
    ind[3] = 1.0;
    std::ostringstream s;
    write_svg(s, m, ind);
    const std::string text = s.str();
    CHECK(text.find("<svg") != std::string::npos);
    std::size_t polys = 0;
    for (std::size_t p = text.find("<polygon"); p != std::string::npos; p = text.find("<polygon", p + 1)) ++polys;
    CHECK(polys == 8);
    std::vector<double> wrong(3, 1.0);
    std::ostringstream t;
    CHECK_THROWS(write_svg(t, m, wrong));
  }
}
