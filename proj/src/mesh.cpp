#include "rtadapt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace rtadapt {

namespace {

std::uint64_t edge_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

std::string_view to_string(BoundaryFlag flag) {
  switch (flag) {
    case BoundaryFlag::interior: return "interior";
    case BoundaryFlag::dirichlet: return "dirichlet";
    case BoundaryFlag::neumann: return "neumann";
  }
  return "?";
}

Domain parse_domain(std::string_view name) {
  if (name == "lshape") return Domain::lshape;
  if (name == "square2x2") return Domain::square2x2;
  if (name == "unit-square") return Domain::unit_square;
  throw MeshError("unknown domain '" + std::string(name) + "'");
}

std::string_view to_string(Domain domain) {
  switch (domain) {
    case Domain::lshape: return "lshape";
    case Domain::square2x2: return "square2x2";
    case Domain::unit_square: return "unit-square";
  }
  return "?";
}

Triangulation::Triangulation(std::vector<Vec2> vertices,
                             std::vector<std::array<Index, 3>> triangles,
                             std::vector<Index> ancestors, const BoundaryClassifier& classify,
                             int generation)
    : vertices_(std::move(vertices)), generation_(generation) {
  if (ancestors.size() != triangles.size())
    throw MeshError("ancestor list does not match the triangle list");
  const auto nv = static_cast<Index>(vertices_.size());
  for (const auto& p : vertices_)
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) throw MeshError("non-finite vertex coordinate");

  elements_.resize(triangles.size());
  std::unordered_map<std::uint64_t, Index> edge_ids;
  edge_ids.reserve(triangles.size() * 2);

  for (std::size_t k = 0; k < triangles.size(); ++k) {
    auto tri = triangles[k];
    for (Index v : tri)
      if (v < 0 || v >= nv) throw MeshError("triangle " + std::to_string(k) + " has an invalid vertex id");
    double area = signed_area(vertex(tri[0]), vertex(tri[1]), vertex(tri[2]));
    if (area < 0.0) {
      std::swap(tri[1], tri[2]);
      area = -area;
    }
    if (!(area > 0.0)) throw MeshError("triangle " + std::to_string(k) + " is degenerate");

    Element& el = elements_[k];
    el.vertices = tri;
    el.area = area;
    el.ancestor = ancestors[k];
    double diameter = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Index a = tri[static_cast<std::size_t>((i + 1) % 3)];
      const Index b = tri[static_cast<std::size_t>((i + 2) % 3)];
      const auto key = edge_key(a, b);
      auto [it, inserted] = edge_ids.try_emplace(key, static_cast<Index>(edges_.size()));
      if (inserted) {
        Edge e;
        e.vertices = {std::min(a, b), std::max(a, b)};
        const Vec2 d = vertex(e.vertices[1]) - vertex(e.vertices[0]);
        e.length = d.norm();
        e.normal = rotate_cw(d) / e.length;
        e.elements = {static_cast<Index>(k), invalid_index};
        edges_.push_back(e);
      } else {
        Edge& e = edges_[static_cast<std::size_t>(it->second)];
        if (e.elements[1] != invalid_index)
          throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") is shared by more than two elements");
        e.elements[1] = static_cast<Index>(k);
      }
      const Index id = it->second;
      el.edges[static_cast<std::size_t>(i)] = id;
      // Traversed a -> b counterclockwise: the outward normal is the clockwise
      // rotation of b - a, which matches the global normal iff a is the lower id.
      el.signs[static_cast<std::size_t>(i)] = a < b ? 1 : -1;
      diameter = std::max(diameter, edges_[static_cast<std::size_t>(id)].length);
    }
    el.diameter = diameter;
  }

  for (auto& e : edges_) {
    if (e.elements[1] == invalid_index)
      e.flag = classify ? classify(e.vertices[0], e.vertices[1]) : BoundaryFlag::dirichlet;
    else
      e.flag = BoundaryFlag::interior;
  }

  vertex_offsets_.assign(static_cast<std::size_t>(nv) + 1, 0);
  for (const auto& el : elements_)
    for (Index v : el.vertices) ++vertex_offsets_[static_cast<std::size_t>(v) + 1];
  for (std::size_t i = 1; i < vertex_offsets_.size(); ++i) vertex_offsets_[i] += vertex_offsets_[i - 1];
  vertex_elements_.resize(static_cast<std::size_t>(vertex_offsets_.back()));
  auto fill = vertex_offsets_;
  for (std::size_t k = 0; k < elements_.size(); ++k)
    for (Index v : elements_[k].vertices)
      vertex_elements_[static_cast<std::size_t>(fill[static_cast<std::size_t>(v)]++)] = static_cast<Index>(k);
}

std::span<const Index> Triangulation::elements_at_vertex(Index v) const {
  if (v < 0 || v >= num_vertices()) throw MeshError("invalid vertex id " + std::to_string(v));
  const auto begin = static_cast<std::size_t>(vertex_offsets_[static_cast<std::size_t>(v)]);
  const auto end = static_cast<std::size_t>(vertex_offsets_[static_cast<std::size_t>(v) + 1]);
  return std::span<const Index>(vertex_elements_).subspan(begin, end - begin);
}

std::vector<Index> Triangulation::edge_patch(Index e) const {
  if (e < 0 || e >= num_edges()) throw MeshError("invalid edge id " + std::to_string(e));
  const Edge& ed = edge(e);
  if (ed.elements[1] == invalid_index) return {ed.elements[0]};
  return {ed.elements[0], ed.elements[1]};
}

std::vector<Index> Triangulation::edge_vertex_patch(Index e) const {
  const Edge& ed = edge(e);
  std::vector<Index> out;
  for (Index v : ed.vertices)
    for (Index k : elements_at_vertex(v)) out.push_back(k);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Index> Triangulation::element_vertex_patch(Index k) const {
  std::vector<Index> out;
  for (Index v : element(k).vertices)
    for (Index j : elements_at_vertex(v)) out.push_back(j);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VertexStar Triangulation::vertex_star(Index v) const {
  const auto incident = elements_at_vertex(v);
  VertexStar star;
  if (incident.empty()) return star;

  // The two edges of each incident element that contain v.
  auto edges_through = [&](Index k) {
    std::array<Index, 2> out{};
    int n = 0;
    const Element& el = element(k);
    for (int i = 0; i < 3; ++i)
      if (el.vertices[static_cast<std::size_t>(i)] != v) out[static_cast<std::size_t>(n++)] = el.edges[static_cast<std::size_t>(i)];
    return out;
  };

  Index start = incident.front();
  Index entry_edge = invalid_index;
  for (Index k : incident) {
    for (Index e : edges_through(k)) {
      if (edge(e).is_boundary()) {
        star.boundary = true;
        // Start the walk at an element owning a boundary edge, entering through it.
        if (entry_edge == invalid_index) {
          start = k;
          entry_edge = e;
        }
      }
    }
  }
  if (entry_edge == invalid_index) entry_edge = edges_through(start)[0];

  Index current = start;
  Index via = entry_edge;
  for (std::size_t guard = 0; guard <= incident.size(); ++guard) {
    star.elements.push_back(current);
    const auto through = edges_through(current);
    const Index exit = through[0] == via ? through[1] : through[0];
    const Edge& ex = edge(exit);
    const Index next = ex.elements[0] == current ? ex.elements[1] : ex.elements[0];
    if (next == invalid_index || next == start) break;
    current = next;
    via = exit;
  }
  if (star.elements.size() != incident.size())
    throw MeshError("vertex star of " + std::to_string(v) + " is not a single fan");
  return star;
}

Vec2 Triangulation::centroid(Index k) const {
  const auto& el = element(k);
  return (vertex(el.vertices[0]) + vertex(el.vertices[1]) + vertex(el.vertices[2])) / 3.0;
}

Vec2 Triangulation::edge_midpoint(Index e) const {
  const auto& ed = edge(e);
  return 0.5 * (vertex(ed.vertices[0]) + vertex(ed.vertices[1]));
}

std::array<Vec2, 3> Triangulation::corners(Index k) const {
  const auto& el = element(k);
  return {vertex(el.vertices[0]), vertex(el.vertices[1]), vertex(el.vertices[2])};
}

Index Triangulation::neighbour(Index k, int local_edge) const {
  const Edge& e = edge(element(k).edges[static_cast<std::size_t>(local_edge)]);
  return e.elements[0] == k ? e.elements[1] : e.elements[0];
}

double Triangulation::total_area() const {
  double sum = 0.0;
  for (const auto& el : elements_) sum += el.area;
  return sum;
}

double Triangulation::min_angle() const {
  double best = std::numbers::pi;
  for (Index k = 0; k < num_elements(); ++k) {
    const auto c = corners(k);
    for (int i = 0; i < 3; ++i) {
      const Vec2 a = c[static_cast<std::size_t>((i + 1) % 3)] - c[static_cast<std::size_t>(i)];
      const Vec2 b = c[static_cast<std::size_t>((i + 2) % 3)] - c[static_cast<std::size_t>(i)];
      best = std::min(best, std::atan2(std::abs(cross(a, b)), a.dot(b)));
    }
  }
  return best;
}

double Triangulation::shape_constant() const {
  double c0 = 0.0;
  for (const auto& el : elements_) c0 = std::max(c0, el.diameter * el.diameter / el.area);
  return c0;
}

Triangulation Triangulation::with_neumann(const std::function<bool(const Vec2&)>& is_neumann) const {
  std::vector<std::array<Index, 3>> tris;
  std::vector<Index> anc;
  tris.reserve(elements_.size());
  anc.reserve(elements_.size());
  for (const auto& el : elements_) {
    tris.push_back(el.vertices);
    anc.push_back(el.ancestor);
  }
  const auto& verts = vertices_;
  auto classify = [&](Index a, Index b) {
    const Vec2 mid = 0.5 * (verts[static_cast<std::size_t>(a)] + verts[static_cast<std::size_t>(b)]);
    return is_neumann(mid) ? BoundaryFlag::neumann : BoundaryFlag::dirichlet;
  };
  return Triangulation(vertices_, std::move(tris), std::move(anc), classify, generation_);
}

void Triangulation::check_conformity() const {
  for (Index e = 0; e < num_edges(); ++e) {
    const Edge& ed = edge(e);
    const bool two = ed.elements[1] != invalid_index;
    if (two == ed.is_boundary())
      throw MeshError("edge " + std::to_string(e) + " has an inconsistent incidence count");
    if (two) {
      int sum = 0;
      for (Index k : ed.elements) {
        const auto& el = element(k);
        for (int i = 0; i < 3; ++i)
          if (el.edges[static_cast<std::size_t>(i)] == e) sum += el.signs[static_cast<std::size_t>(i)];
      }
      if (sum != 0) throw MeshError("edge " + std::to_string(e) + " has equal outward signs on both sides");
    }
  }
  // no vertex may sit in the interior of a boundary-flagged edge
  for (Index e = 0; e < num_edges(); ++e) {
    const Edge& ed = edge(e);
    if (!ed.is_boundary()) continue;
    const Vec2 a = vertex(ed.vertices[0]);
    const Vec2 b = vertex(ed.vertices[1]);
    for (Index k : elements_at_vertex(ed.vertices[0])) {
      for (Index v : element(k).vertices) {
        if (v == ed.vertices[0] || v == ed.vertices[1]) continue;
        const Vec2 p = vertex(v);
        const double t = (p - a).dot(b - a) / (ed.length * ed.length);
        if (t > 0.0 && t < 1.0 && std::abs(cross(b - a, p - a)) <= 1e-12 * ed.length * ed.length)
          throw MeshError("hanging node " + std::to_string(v) + " on edge " + std::to_string(e));
      }
    }
  }
}

Triangulation build_initial_mesh(Domain domain) {
  std::vector<Vec2> v;
  std::vector<std::array<Index, 3>> t;
  switch (domain) {
    case Domain::lshape:
      // origin first; each unit square split by its diagonal through the origin
      v = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1),
           Vec2(-1, 1), Vec2(-1, 0), Vec2(-1, -1), Vec2(0, -1)};
      t = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 6}, {0, 6, 7}};
      break;
    case Domain::square2x2:
    case Domain::unit_square: {
      const double lo = domain == Domain::square2x2 ? -1.0 : 0.0;
      const double hi = 1.0;
      const double mid = 0.5 * (lo + hi);
      const double xs[3] = {lo, mid, hi};
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) v.emplace_back(xs[i], xs[j]);
      if (domain == Domain::unit_square) {
        // Ring around the centre (index 4), counterclockwise from (hi, mid).
        const Index ring[8] = {5, 8, 7, 6, 3, 0, 1, 2};
        for (int i = 0; i < 8; ++i) t.push_back({4, ring[i], ring[(i + 1) % 8]});
      } else {
        // Every quadrant square cut by its diagonal parallel to (-1, 1).
        t = {{4, 5, 7}, {5, 8, 7}, {4, 7, 6}, {4, 6, 3}, {4, 3, 1}, {3, 0, 1}, {4, 1, 2}, {4, 2, 5}};
      }
      break;
    }
  }
  std::vector<Index> anc(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) anc[k] = static_cast<Index>(k);
  return Triangulation(std::move(v), std::move(t), std::move(anc));
}

int longest_local_edge(const Triangulation& mesh, Index k) {
  const Element& el = mesh.element(k);
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    const Edge& cand = mesh.edge(el.edges[static_cast<std::size_t>(i)]);
    const Edge& cur = mesh.edge(el.edges[static_cast<std::size_t>(best)]);
    const double tol = 1e-12 * std::max(cand.length, cur.length);
    if (cand.length > cur.length + tol ||
        (std::abs(cand.length - cur.length) <= tol && cand.vertices < cur.vertices))
      best = i;
  }
  return best;
}

Triangulation refine(const Triangulation& mesh, std::span<const Index> marked) {
  const auto ne = static_cast<std::size_t>(mesh.num_edges());
  const auto nt = static_cast<std::size_t>(mesh.num_elements());
  std::vector<char> edge_marked(ne, 0);
  std::vector<int> longest(nt);
  for (Index k = 0; k < mesh.num_elements(); ++k) longest[static_cast<std::size_t>(k)] = longest_local_edge(mesh, k);

  std::vector<Index> work;
  auto mark_edge = [&](Index e) {
    if (edge_marked[static_cast<std::size_t>(e)]) return;
    edge_marked[static_cast<std::size_t>(e)] = 1;
    for (Index k : mesh.edge(e).elements)
      if (k != invalid_index) work.push_back(k);
  };
  for (Index k : marked) {
    if (k < 0 || k >= mesh.num_elements()) throw MeshError("marked element " + std::to_string(k) + " out of range");
    mark_edge(mesh.element(k).edges[static_cast<std::size_t>(longest[static_cast<std::size_t>(k)])]);
  }
  // Closure: an element with any marked edge must bisect its longest edge first.
  const std::size_t cap = 4 * ne + 16;
  std::size_t steps = 0;
  while (!work.empty()) {
    if (++steps > cap) throw MeshError("refinement closure did not terminate");
    const Index k = work.back();
    work.pop_back();
    mark_edge(mesh.element(k).edges[static_cast<std::size_t>(longest[static_cast<std::size_t>(k)])]);
  }

  std::vector<Vec2> verts(mesh.vertices().begin(), mesh.vertices().end());
  std::vector<Index> midpoint(ne, invalid_index);
  std::unordered_map<std::uint64_t, BoundaryFlag> boundary_flags;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(e);
    if (edge_marked[static_cast<std::size_t>(e)]) {
      midpoint[static_cast<std::size_t>(e)] = static_cast<Index>(verts.size());
      verts.push_back(mesh.edge_midpoint(e));
    }
    if (ed.is_boundary()) {
      const Index m = midpoint[static_cast<std::size_t>(e)];
      if (m == invalid_index) {
        boundary_flags[edge_key(ed.vertices[0], ed.vertices[1])] = ed.flag;
      } else {
        boundary_flags[edge_key(ed.vertices[0], m)] = ed.flag;
        boundary_flags[edge_key(m, ed.vertices[1])] = ed.flag;
      }
    }
  }

  std::vector<std::array<Index, 3>> tris;
  std::vector<Index> anc;
  tris.reserve(nt * 2);
  anc.reserve(nt * 2);
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    const Element& el = mesh.element(k);
    const int l = longest[static_cast<std::size_t>(k)];
    const auto local = [&](int i) { return static_cast<std::size_t>((l + i) % 3); };
    const Index mid_long = midpoint[static_cast<std::size_t>(el.edges[local(0)])];
    if (mid_long == invalid_index) {
      tris.push_back(el.vertices);
      anc.push_back(el.ancestor);
      continue;
    }
    // apex A opposite the longest edge BC, midpoint M
    const Index a = el.vertices[local(0)];
    const Index b = el.vertices[local(1)];
    const Index c = el.vertices[local(2)];
    const Index m = mid_long;
    const Index mid_ab = midpoint[static_cast<std::size_t>(el.edges[local(2)])];
    const Index mid_ca = midpoint[static_cast<std::size_t>(el.edges[local(1)])];
    if (mid_ab == invalid_index) {
      tris.push_back({a, b, m});
    } else {
      tris.push_back({m, a, mid_ab});
      tris.push_back({m, mid_ab, b});
      anc.push_back(el.ancestor);
    }
    anc.push_back(el.ancestor);
    if (mid_ca == invalid_index) {
      tris.push_back({a, m, c});
    } else {
      tris.push_back({m, c, mid_ca});
      tris.push_back({m, mid_ca, a});
      anc.push_back(el.ancestor);
    }
    anc.push_back(el.ancestor);
  }

  auto classify = [&](Index a, Index b) {
    const auto it = boundary_flags.find(edge_key(a, b));
    if (it == boundary_flags.end())
      throw MeshError("refinement produced an unexpected boundary edge (" + std::to_string(a) + "," +
                      std::to_string(b) + ")");
    return it->second;
  };
  return Triangulation(std::move(verts), std::move(tris), std::move(anc), classify, mesh.generation() + 1);
}

Triangulation uniform_refine(const Triangulation& mesh) {
  std::vector<Index> all(static_cast<std::size_t>(mesh.num_elements()));
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<Index>(k);
  return refine(mesh, all);
}

}  // namespace rtadapt
