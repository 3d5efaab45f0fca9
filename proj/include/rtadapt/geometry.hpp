#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <array>
#include <cmath>
#include <cstdint>

namespace rtadapt {

using Index = std::int32_t;
inline constexpr Index invalid_index = -1;

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Signed area of the triangle (a, b, c); positive for counterclockwise order.
inline double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross(b - a, c - a);
}

/// 90 degree clockwise rotation.
inline Vec2 rotate_cw(const Vec2& v) { return Vec2(v.y(), -v.x()); }

/// Tangent (-n2, n1) associated with a unit normal.
inline Vec2 tangent_of(const Vec2& n) { return Vec2(-n.y(), n.x()); }

/// Closed-form eigenvalues of a symmetric 2x2 matrix, ascending.
inline std::array<double, 2> symmetric_eigenvalues(const Mat2& s) {
  const double mean = 0.5 * (s(0, 0) + s(1, 1));
  const double half_diff = 0.5 * (s(0, 0) - s(1, 1));
  const double radius = std::hypot(half_diff, s(0, 1));
  return {mean - radius, mean + radius};
}

/// Symmetric inverse square root of an SPD 2x2 matrix.
inline Mat2 inverse_sqrt_spd(const Mat2& s) {
  // sqrt(S) = (S + sqrt(det S) I) / sqrt(tr S + 2 sqrt(det S))
  const double root_det = std::sqrt(s.determinant());
  const double t = std::sqrt(s.trace() + 2.0 * root_det);
  const Mat2 root = (s + root_det * Mat2::Identity()) / t;
  return root.inverse();
}

}  // namespace rtadapt
