#pragma once

#include "rtadapt/geometry.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rtadapt {

enum class BoundaryFlag : std::uint8_t { interior, dirichlet, neumann };

std::string_view to_string(BoundaryFlag flag);

enum class Domain { lshape, square2x2, unit_square };

Domain parse_domain(std::string_view name);
std::string_view to_string(Domain domain);

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A side of the triangulation. The normal points 90 degrees clockwise from the
/// direction vertices[0] -> vertices[1], with vertices[0] < vertices[1], so the
/// orientation is global and does not depend on the incident element.
struct Edge {
  std::array<Index, 2> vertices{};
  Vec2 normal = Vec2::Zero();
  double length = 0.0;
  BoundaryFlag flag = BoundaryFlag::interior;
  /// elements[1] is invalid_index on boundary edges.
  std::array<Index, 2> elements{invalid_index, invalid_index};

  bool is_boundary() const { return flag != BoundaryFlag::interior; }
};

/// Counterclockwise triangle. Local edge i is opposite local vertex i, and
/// signs[i] is +1 when the global normal of edges[i] points out of the element.
struct Element {
  std::array<Index, 3> vertices{};
  std::array<Index, 3> edges{};
  std::array<int, 3> signs{};
  double area = 0.0;
  double diameter = 0.0;
  Index ancestor = invalid_index;
};

struct VertexStar {
  std::vector<Index> elements;  // cyclic order around the vertex
  bool boundary = false;
};

/// Decides the flag of a boundary edge from its endpoint ids.
using BoundaryClassifier = std::function<BoundaryFlag(Index v0, Index v1)>;

/// Conforming triangulation. Immutable once built; refinement returns a new one.
class Triangulation {
 public:
  Triangulation() = default;

  /// Builds the edge structure from triangles. Clockwise triangles are
  /// reoriented. A null classifier marks every boundary edge Dirichlet.
  Triangulation(std::vector<Vec2> vertices, std::vector<std::array<Index, 3>> triangles,
                std::vector<Index> ancestors, const BoundaryClassifier& classify = {},
                int generation = 0);

  std::span<const Vec2> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Element> elements() const { return elements_; }

  const Vec2& vertex(Index v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const Edge& edge(Index e) const { return edges_[static_cast<std::size_t>(e)]; }
  const Element& element(Index k) const { return elements_[static_cast<std::size_t>(k)]; }

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  Index num_elements() const { return static_cast<Index>(elements_.size()); }
  int generation() const { return generation_; }

  /// Elements containing vertex v (unordered).
  std::span<const Index> elements_at_vertex(Index v) const;

  /// Elements sharing side e: two for interior sides, one on the boundary.
  std::vector<Index> edge_patch(Index e) const;

  /// Elements whose closure meets the closure of side e.
  std::vector<Index> edge_vertex_patch(Index e) const;

  /// Elements whose closure meets the closure of element k (k included).
  std::vector<Index> element_vertex_patch(Index k) const;

  VertexStar vertex_star(Index v) const;

  Vec2 centroid(Index k) const;
  Vec2 edge_midpoint(Index e) const;
  std::array<Vec2, 3> corners(Index k) const;

  /// Neighbour across local edge i of element k, or invalid_index.
  Index neighbour(Index k, int local_edge) const;

  double total_area() const;
  /// Smallest interior angle over all elements, in radians.
  double min_angle() const;
  /// Largest h_K^2 / |K| over all elements (shape constant).
  double shape_constant() const;

  /// Returns the same triangulation with boundary flags reassigned by a
  /// predicate on the edge midpoint (true means Neumann).
  Triangulation with_neumann(const std::function<bool(const Vec2&)>& is_neumann) const;

  /// Throws MeshError if any conformity or orientation invariant is violated.
  void check_conformity() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<Edge> edges_;
  std::vector<Element> elements_;
  std::vector<Index> vertex_offsets_;
  std::vector<Index> vertex_elements_;
  int generation_ = 0;
};

Triangulation build_initial_mesh(Domain domain);

/// Bisects every marked element through its longest edge and closes the
/// result by bisecting longest edges of neighbours until no hanging node
/// remains. Children inherit the coarse ancestor and boundary flags.
Triangulation refine(const Triangulation& mesh, std::span<const Index> marked);

Triangulation uniform_refine(const Triangulation& mesh);

/// Local index of the longest edge of element k (ties go to the edge with the
/// lexicographically smaller sorted vertex pair).
int longest_local_edge(const Triangulation& mesh, Index k);

}  // namespace rtadapt
