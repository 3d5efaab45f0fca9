#pragma once

#include "rtadapt/mesh.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rtadapt {

class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

/// Data of one coarse element: S symmetric positive definite, constant
/// velocity w, reaction r and the divergence of w.
struct ElementCoefficients {
  Mat2 S = Mat2::Identity();
  Vec2 w = Vec2::Zero();
  double r = 0.0;
  double divw = 0.0;
};

struct CoefficientBounds {
  double c_S = 0.0;     // smallest eigenvalue of S
  double C_S = 0.0;     // largest eigenvalue of S
  double C_w = 0.0;     // sup |w|
  double c_wr = 0.0;    // divw / 2 + r
  double C_wr = 0.0;    // |divw + r|
  double C_divw = 0.0;  // |divw|
};

/// Throws ProblemError when S is not SPD, c_wr < 0, or c_wr = 0 while C_wr != 0.
CoefficientBounds derive_bounds(const ElementCoefficients& c);

/// a / sqrt(c_wr) with the convention 0 / 0 = 0 (c_wr = 0 forces the
/// numerators that appear in the estimators to vanish). A nonzero numerator
/// over zero yields +infinity.
double over_sqrt_reaction(double numerator, double c_wr);

/// Coefficient maxima over vertex patches ("elements whose closure touches").
struct PatchQuantities {
  std::vector<double> edge_diffusion_max;     // per edge: max C_S
  std::vector<double> edge_velocity_reaction; // per edge: max C_w / sqrt(c_wr)
  std::vector<double> edge_velocity_diffusion;// per edge: max h_K C_w / sqrt(c_S)
  std::vector<double> edge_convection;        // per edge: min of the two above
  std::vector<double> element_reaction_max;   // per element: max c_wr
  std::vector<double> element_divergence;     // per element: max C_divw / sqrt(c_wr)
};

PatchQuantities patch_quantities(const Triangulation& mesh, std::span<const CoefficientBounds> bounds);

struct ProblemData {
  std::string name;
  /// Indexed by coarse ancestor id.
  std::vector<ElementCoefficients> coefficients;
  ScalarField source;
  ScalarField dirichlet;
  /// Optional gradient of an extension of the Dirichlet data; only its
  /// tangential component on Dirichlet sides is used.
  VectorField dirichlet_gradient;
  /// Prescribed u . n (outward) on Neumann sides.
  ScalarField neumann_flux;
  /// Boundary-side classifier evaluated at side midpoints.
  std::function<bool(const Vec2&)> is_neumann;

  const ElementCoefficients& on(const Triangulation& mesh, Index k) const {
    return coefficients[static_cast<std::size_t>(mesh.element(k).ancestor)];
  }
  std::vector<CoefficientBounds> element_bounds(const Triangulation& mesh) const;
  /// True when w = 0, r = 0 and divw = 0 on every coarse element.
  bool pure_diffusion() const;
  /// Validates every coarse element's data; throws ProblemError.
  void validate() const;
  /// Derivative of the Dirichlet data along unit tangent t at x: from
  /// dirichlet_gradient when set, otherwise a fourth-order central difference
  /// with step `step`.
  double dirichlet_tangential_derivative(const Vec2& x, const Vec2& t, double step) const;
};

struct ExactSolution {
  ScalarField p;
  VectorField grad_p;

  Vec2 flux(const Vec2& x, const Mat2& S) const { return -(S * grad_p(x)); }
};

enum class BenchmarkCase { lshape, kellogg1, kellogg2, layer };

BenchmarkCase parse_benchmark(std::string_view name);
std::string_view to_string(BenchmarkCase c);

struct BenchmarkParams {
  double eps = 1e-2;  // layer diffusion
  double a = 0.05;    // layer width

  bool operator==(const BenchmarkParams&) const = default;
};

struct Benchmark {
  BenchmarkCase id = BenchmarkCase::lshape;
  Triangulation mesh;
  ProblemData problem;
  ExactSolution exact;
};

/// Builds the coarse mesh, data and exact solution of a benchmark.
Benchmark benchmark(BenchmarkCase id, const BenchmarkParams& params = {});

/// Checkerboard constants, quadrants counted counterclockwise from (+,+).
struct KelloggConstants {
  std::array<double, 4> s{};
  double alpha = 0.0;
  std::array<double, 4> a{};
  std::array<double, 4> b{};
};

const KelloggConstants& kellogg_constants(int which);

/// Quadrant index 0..3 of a point by its polar angle in [0, 2 pi).
int quadrant_of(const Vec2& x);

}  // namespace rtadapt
