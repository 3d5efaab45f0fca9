#include "rtadapt/mesh_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <stdexcept>
#include <ostream>
#include <string>

namespace rtadapt {

namespace {

BoundaryFlag parse_flag(const std::string& s) {
  if (s == "interior") return BoundaryFlag::interior;
  if (s == "dirichlet") return BoundaryFlag::dirichlet;
  if (s == "neumann") return BoundaryFlag::neumann;
  throw MeshError("unknown edge flag '" + s + "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T read_value(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw MeshError(std::string("mesh dump: cannot read ") + what);
  return v;
}

void expect_id(std::istream& in, Index expected, const char* what) {
  if (read_value<Index>(in, what) != expected) throw MeshError(std::string("mesh dump: ") + what + " ids out of order");
}

}  // namespace

void write_mesh(std::ostream& out, const Triangulation& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_edges() << ' ' << mesh.num_elements() << '\n';
  for (Index v = 0; v < mesh.num_vertices(); ++v)
    out << v << ' ' << fmt(mesh.vertex(v).x()) << ' ' << fmt(mesh.vertex(v).y()) << '\n';
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(e);
    out << e << ' ' << ed.vertices[0] << ' ' << ed.vertices[1] << ' ' << to_string(ed.flag) << '\n';
  }
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    const Element& el = mesh.element(k);
    out << k << ' ' << el.vertices[0] << ' ' << el.vertices[1] << ' ' << el.vertices[2] << ' ' << el.edges[0] << ' '
        << el.edges[1] << ' ' << el.edges[2] << ' ' << el.ancestor << '\n';
  }
}

Triangulation read_mesh(std::istream& in) {
  const auto nv = read_value<Index>(in, "header");
  const auto ne = read_value<Index>(in, "header");
  const auto nt = read_value<Index>(in, "header");
  if (nv < 3 || ne < 3 || nt < 1) throw MeshError("mesh dump: bad header");
  std::vector<Vec2> vertices(static_cast<std::size_t>(nv));
  for (Index v = 0; v < nv; ++v) {
    expect_id(in, v, "vertex");
    const double x = read_value<double>(in, "vertex x");
    const double y = read_value<double>(in, "vertex y");
    vertices[static_cast<std::size_t>(v)] = Vec2(x, y);
  }
  std::map<std::pair<Index, Index>, BoundaryFlag> flags;
  std::vector<std::array<Index, 2>> edge_vertices(static_cast<std::size_t>(ne));
  for (Index e = 0; e < ne; ++e) {
    expect_id(in, e, "edge");
    const auto a = read_value<Index>(in, "edge vertex");
    const auto b = read_value<Index>(in, "edge vertex");
    const auto flag = parse_flag(read_value<std::string>(in, "edge flag"));
    flags[{std::min(a, b), std::max(a, b)}] = flag;
    edge_vertices[static_cast<std::size_t>(e)] = {a, b};
  }
  std::vector<std::array<Index, 3>> triangles(static_cast<std::size_t>(nt));
  std::vector<Index> ancestors(static_cast<std::size_t>(nt));
  for (Index k = 0; k < nt; ++k) {
    expect_id(in, k, "element");
    auto& t = triangles[static_cast<std::size_t>(k)];
    for (auto& v : t) {
      v = read_value<Index>(in, "element vertex");
      if (v < 0 || v >= nv) throw MeshError("mesh dump: element vertex out of range");
    }
    for (int i = 0; i < 3; ++i) read_value<Index>(in, "element edge");
    ancestors[static_cast<std::size_t>(k)] = read_value<Index>(in, "element ancestor");
  }
  auto classify = [&](Index a, Index b) {
    const auto it = flags.find({std::min(a, b), std::max(a, b)});
    if (it == flags.end() || it->second == BoundaryFlag::interior)
      throw MeshError("mesh dump: boundary edge missing from the edge list");
    return it->second;
  };
  Triangulation mesh(std::move(vertices), std::move(triangles), std::move(ancestors), classify);
  if (mesh.num_edges() != ne) throw MeshError("mesh dump: edge count does not match the triangles");
  for (Index e = 0; e < ne; ++e) {
    const auto& stored = edge_vertices[static_cast<std::size_t>(e)];
    const auto& built = mesh.edge(e).vertices;
    if (std::min(stored[0], stored[1]) != built[0] || std::max(stored[0], stored[1]) != built[1])
      throw MeshError("mesh dump: edge " + std::to_string(e) + " does not match the triangles");
  }
  return mesh;
}

void write_svg(std::ostream& out, const Triangulation& mesh, std::span<const double> indicator,
               const SvgOptions& options) {
  if (!indicator.empty() && indicator.size() != static_cast<std::size_t>(mesh.num_elements()))
    throw std::invalid_argument("indicator size does not match the element count");
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const Vec2& p : mesh.vertices()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec2 span = (hi - lo).cwiseMax(Vec2::Constant(1e-300));
  const double margin = 10.0;
  const double scale = (options.width_px - 2 * margin) / span.x();
  const double height = span.y() * scale + 2 * margin;
  auto px = [&](const Vec2& p) {
    return fmt(margin + (p.x() - lo.x()) * scale) + "," + fmt(margin + (hi.y() - p.y()) * scale);
  };
  double top = 0.0;
  for (double v : indicator) top = std::max(top, v);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(options.width_px) << "\" height=\""
      << fmt(height) << "\">\n";
  const double stroke =
      std::clamp(options.width_px / (40.0 * std::sqrt(static_cast<double>(mesh.num_elements()))), 0.05, 1.0);
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    const auto c = mesh.corners(k);
    std::string fill = "none";
    if (!indicator.empty()) {
      double t = 0.0;
      const double v = indicator[static_cast<std::size_t>(k)];
      if (top > 0.0 && v > 0.0) t = std::clamp(1.0 + std::log10(v / top) / options.decades, 0.0, 1.0);
      const auto other = std::to_string(std::lround(255.0 * (1.0 - t)));
      fill = "rgb(255," + other + "," + other + ")";
    }
    out << "<polygon points=\"" << px(c[0]) << ' ' << px(c[1]) << ' ' << px(c[2]) << "\" fill=\"" << fill
        << "\" stroke=\"black\" stroke-width=\"" << fmt(stroke) << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace rtadapt
