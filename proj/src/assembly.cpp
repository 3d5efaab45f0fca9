#include "rtadapt/assembly.hpp"

#include "rtadapt/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace rtadapt {

namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

int local_edge_index(const Element& el, Index e) {
  for (int i = 0; i < 3; ++i)
    if (el.edges[static_cast<std::size_t>(i)] == e) return i;
  return -1;
}

std::vector<LocalMatrices> all_local_matrices(const Triangulation& mesh, const ProblemData& problem) {
  std::vector<LocalMatrices> out(at(mesh.num_elements()));
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < mesh.num_elements(); ++k) out[at(k)] = local_matrices(mesh, k, problem.on(mesh, k));
  return out;
}

}  // namespace

Scheme parse_scheme(std::string_view name) {
  if (name == "centered") return Scheme::centered;
  if (name == "upwind") return Scheme::upwind;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(Scheme s) { return s == Scheme::centered ? "centered" : "upwind"; }

AffineFlux rt0_basis(const Triangulation& mesh, Index k, int local_edge) {
  const Element& el = mesh.element(k);
  const auto i = static_cast<std::size_t>(local_edge);
  const double len = mesh.edge(el.edges[i]).length;
  const double c = el.signs[i] * len / (2.0 * el.area);
  const Vec2& opposite = mesh.vertex(el.vertices[i]);
  return AffineFlux{-c * opposite, c};
}

LocalMatrices local_matrices(const Triangulation& mesh, Index k, const ElementCoefficients& coeffs) {
  const Element& el = mesh.element(k);
  if (!(el.area > 0.0)) throw MeshError("degenerate element " + std::to_string(k));
  const Mat2 G = coeffs.S.inverse();
  const auto corners = mesh.corners(k);
  std::array<AffineFlux, 3> phi;
  for (int i = 0; i < 3; ++i) phi[static_cast<std::size_t>(i)] = rt0_basis(mesh, k, i);

  LocalMatrices lm;
  const QuadratureRule& rule = edge_midpoint_rule();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Vec2 x = rule.map(q, corners);
    const double w = rule.weights[q] * el.area;
    std::array<Vec2, 3> val;
    for (std::size_t i = 0; i < 3; ++i) val[i] = phi[i](x);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) lm.mass[i][j] += w * val[i].dot(G * val[j]);
  }
  const Vec2 centre = mesh.centroid(k);
  for (std::size_t i = 0; i < 3; ++i) {
    lm.divergence[i] = el.signs[i] * mesh.edge(el.edges[i]).length;
    lm.convection[i] = el.area * (G * phi[i](centre)).dot(coeffs.w);
  }
  lm.reaction = (coeffs.r + coeffs.divw) * el.area;
  return lm;
}

double flux_through_edge(const Vec2& w, const Triangulation& mesh, Index k, int local_edge) {
  const Element& el = mesh.element(k);
  const auto i = static_cast<std::size_t>(local_edge);
  const Edge& e = mesh.edge(el.edges[i]);
  return el.signs[i] * w.dot(e.normal) * e.length;
}

double edge_lower_diffusion(const Triangulation& mesh, std::span<const CoefficientBounds> bounds, Index e) {
  const Edge& ed = mesh.edge(e);
  const double cK = bounds[at(ed.elements[0])].c_S;
  if (ed.elements[1] == invalid_index) return cK;
  const double cL = bounds[at(ed.elements[1])].c_S;
  return 2.0 * cK * cL / (cK + cL);
}

double upwind_weight(double c_S_edge, double edge_length, double edge_diameter, double w_K_sigma, bool boundary) {
  if (w_K_sigma == 0.0) return 0.0;
  if (boundary && w_K_sigma < 0.0) return 0.0;
  return std::min(c_S_edge * edge_length / (edge_diameter * std::abs(w_K_sigma)), 0.5);
}

UpwindCoefficients upwind_value_coeffs(double nu, double w_K_sigma) {
  if (w_K_sigma >= 0.0) return {1.0 - nu, nu};
  return {nu, 1.0 - nu};
}

std::vector<double> dirichlet_edge_means(const Triangulation& mesh, const ProblemData& problem) {
  std::vector<double> out(at(mesh.num_edges()), 0.0);
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(e);
    if (ed.flag != BoundaryFlag::dirichlet) continue;
    const Vec2& a = mesh.vertex(ed.vertices[0]);
    const Vec2& b = mesh.vertex(ed.vertices[1]);
    out[at(e)] = integrate_segment(a, b, 3, problem.dirichlet) / ed.length;
  }
  return out;
}

std::vector<double> neumann_edge_dofs(const Triangulation& mesh, const ProblemData& problem) {
  std::vector<double> out(at(mesh.num_edges()), 0.0);
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(e);
    if (ed.flag != BoundaryFlag::neumann) continue;
    const Element& el = mesh.element(ed.elements[0]);
    const int i = local_edge_index(el, e);
    const Vec2& a = mesh.vertex(ed.vertices[0]);
    const Vec2& b = mesh.vertex(ed.vertices[1]);
    const double mean = integrate_segment(a, b, 3, problem.neumann_flux) / ed.length;
    out[at(e)] = el.signs[static_cast<std::size_t>(i)] * mean;
  }
  return out;
}

UpwindData upwind_data(const Triangulation& mesh, const ProblemData& problem) {
  const auto bounds = problem.element_bounds(mesh);
  UpwindData d;
  d.nu.assign(at(mesh.num_edges()), 0.0);
  d.exterior_value = dirichlet_edge_means(mesh, problem);
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(e);
    const Index k = ed.elements[0];
    const int i = local_edge_index(mesh.element(k), e);
    const double wks = flux_through_edge(problem.on(mesh, k).w, mesh, k, i);
    d.nu[at(e)] = upwind_weight(edge_lower_diffusion(mesh, bounds, e), ed.length, ed.length, wks, ed.is_boundary());
  }
  return d;
}

namespace {

/// Shared skeleton: edge rows are identical for both schemes.
struct Assembler {
  const Triangulation& mesh;
  const ProblemData& problem;
  SaddleSystem sys;
  std::vector<Triplet> entries;
  std::vector<LocalMatrices> local;
  std::vector<double> load;

  Assembler(const Triangulation& m, const ProblemData& p, Scheme scheme) : mesh(m), problem(p) {
    sys.scheme = scheme;
    sys.num_elements = mesh.num_elements();
    sys.edge_row.assign(at(mesh.num_edges()), invalid_index);
    sys.fixed_flux = neumann_edge_dofs(mesh, problem);
    Index next = 0;
    for (Index e = 0; e < mesh.num_edges(); ++e)
      if (mesh.edge(e).flag != BoundaryFlag::neumann) sys.edge_row[at(e)] = next++;
    sys.num_free_edges = next;
    sys.rhs.assign(at(sys.size()), 0.0);
    entries.reserve(at(mesh.num_elements()) * 22);
    local = all_local_matrices(mesh, problem);
    load = source_integrals(mesh, problem);
    assemble_edge_rows();
  }

  /// Adds value * u_e to row, moving it to the right-hand side when e is fixed.
  void add_flux(Index row, Index e, double value) {
    const Index col = sys.edge_row[at(e)];
    if (col == invalid_index)
      sys.rhs[at(row)] -= value * sys.fixed_flux[at(e)];
    else
      entries.push_back({row, col, value});
  }

  void assemble_edge_rows() {
    const auto pd = dirichlet_edge_means(mesh, problem);
    for (Index k = 0; k < mesh.num_elements(); ++k) {
      const Element& el = mesh.element(k);
      const LocalMatrices& lm = local[at(k)];
      for (std::size_t i = 0; i < 3; ++i) {
        const Index row = sys.edge_row[at(el.edges[i])];
        if (row == invalid_index) continue;
        for (std::size_t j = 0; j < 3; ++j) add_flux(row, el.edges[j], lm.mass[i][j]);
        entries.push_back({row, sys.element_row(k), -lm.divergence[i]});
        const Edge& ed = mesh.edge(el.edges[i]);
        if (ed.flag == BoundaryFlag::dirichlet) sys.rhs[at(row)] -= el.signs[i] * ed.length * pd[at(el.edges[i])];
      }
    }
  }

  void element_divergence_terms(Index k) {
    const Element& el = mesh.element(k);
    const Index row = sys.element_row(k);
    sys.rhs[at(row)] = -load[at(k)];
    for (std::size_t i = 0; i < 3; ++i) add_flux(row, el.edges[i], -local[at(k)].divergence[i]);
  }

  SaddleSystem finish() {
    sys.matrix = SparseMatrix(sys.size(), sys.size(), std::move(entries));
    return std::move(sys);
  }
};

}  // namespace

SaddleSystem assemble_centered(const Triangulation& mesh, const ProblemData& problem) {
  Assembler as(mesh, problem, Scheme::centered);
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    const Element& el = mesh.element(k);
    const LocalMatrices& lm = as.local[at(k)];
    const Index row = as.sys.element_row(k);
    as.element_divergence_terms(k);
    for (std::size_t i = 0; i < 3; ++i) as.add_flux(row, el.edges[i], lm.convection[i]);
    as.entries.push_back({row, row, -lm.reaction});
  }
  return as.finish();
}

SaddleSystem assemble_upwind(const Triangulation& mesh, const ProblemData& problem) {
  Assembler as(mesh, problem, Scheme::upwind);
  const UpwindData up = upwind_data(mesh, problem);
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    const Element& el = mesh.element(k);
    const ElementCoefficients& c = problem.on(mesh, k);
    const Index row = as.sys.element_row(k);
    as.element_divergence_terms(k);
    double diagonal = c.r * el.area;
    for (int i = 0; i < 3; ++i) {
      const Index e = el.edges[static_cast<std::size_t>(i)];
      const Edge& ed = mesh.edge(e);
      const double wks = flux_through_edge(c.w, mesh, k, i);
      if (wks == 0.0) continue;
      if (ed.flag == BoundaryFlag::neumann) {
        diagonal += wks;
        continue;
      }
      const auto coef = upwind_value_coeffs(up.nu[at(e)], wks);
      diagonal += wks * coef.own;
      if (ed.is_boundary()) {
        as.sys.rhs[at(row)] += wks * coef.other * up.exterior_value[at(e)];
      } else {
        const Index nb = mesh.neighbour(k, i);
        as.entries.push_back({row, as.sys.element_row(nb), -wks * coef.other});
      }
    }
    as.entries.push_back({row, row, -diagonal});
  }
  return as.finish();
}

SaddleSystem assemble(const Triangulation& mesh, const ProblemData& problem, Scheme scheme) {
  return scheme == Scheme::centered ? assemble_centered(mesh, problem) : assemble_upwind(mesh, problem);
}

AffineFlux MixedSolution::on(const Triangulation& mesh, Index k) const {
  const Element& el = mesh.element(k);
  AffineFlux u;
  for (int i = 0; i < 3; ++i) {
    const AffineFlux phi = rt0_basis(mesh, k, i);
    const double dof = flux[at(el.edges[static_cast<std::size_t>(i)])];
    u.a += dof * phi.a;
    u.b += dof * phi.b;
  }
  return u;
}

std::vector<double> source_integrals(const Triangulation& mesh, const ProblemData& problem) {
  std::vector<double> out(at(mesh.num_elements()));
  const QuadratureRule& rule = seven_point_rule();
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < mesh.num_elements(); ++k)
    out[at(k)] = integrate(rule, mesh.corners(k), mesh.element(k).area, problem.source);
  return out;
}

std::vector<double> centered_residual_integrals(const Triangulation& mesh, const ProblemData& problem,
                                                const MixedSolution& solution) {
  const auto load = source_integrals(mesh, problem);
  std::vector<double> out(at(mesh.num_elements()));
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    const Element& el = mesh.element(k);
    const ElementCoefficients& c = problem.on(mesh, k);
    const AffineFlux u = solution.on(mesh, k);
    const Mat2 G = c.S.inverse();
    // (S^-1 u_h) . w is affine: its integral is |K| times its centroid value.
    const double conv = el.area * (G * u(mesh.centroid(k))).dot(c.w);
    out[at(k)] = load[at(k)] - u.divergence() * el.area + conv -
                 (c.r + c.divw) * solution.pressure[at(k)] * el.area;
  }
  return out;
}

std::vector<double> conservation_defects(const Triangulation& mesh, const ProblemData& problem,
                                         const MixedSolution& solution) {
  if (solution.scheme == Scheme::centered) return centered_residual_integrals(mesh, problem, solution);
  const auto load = source_integrals(mesh, problem);
  const UpwindData up = upwind_data(mesh, problem);
  std::vector<double> out(at(mesh.num_elements()));
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    const Element& el = mesh.element(k);
    const ElementCoefficients& c = problem.on(mesh, k);
    const double pK = solution.pressure[at(k)];
    double lhs = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const Index e = el.edges[ii];
      const Edge& ed = mesh.edge(e);
      lhs += el.signs[ii] * ed.length * solution.flux[at(e)];
      const double wks = flux_through_edge(c.w, mesh, k, i);
      double face = pK;
      if (ed.flag != BoundaryFlag::neumann) {
        const auto coef = upwind_value_coeffs(up.nu[at(e)], wks);
        const double other = ed.is_boundary() ? up.exterior_value[at(e)] : solution.pressure[at(mesh.neighbour(k, i))];
        face = coef.own * pK + coef.other * other;
      }
      lhs += wks * face;
    }
    lhs += c.r * el.area * pK;
    out[at(k)] = load[at(k)] - lhs;
  }
  return out;
}

}  // namespace rtadapt
