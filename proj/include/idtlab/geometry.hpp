#pragma once

// Triangle primitives evaluated purely from edge lengths.
//
// Angles and areas use Kahan's rearrangements of the law of cosines and of
// Heron's formula so that needle-like triangles keep full relative accuracy.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace idtlab {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;

/// Strict triangle inequality for all three orderings.
inline bool satisfies_triangle_inequality(double a, double b, double c) {
  return a > 0 && b > 0 && c > 0 && a < b + c && b < a + c && c < a + b;
}

/// Area of a triangle with side lengths a, b, c; NaN when the lengths violate
/// the triangle inequality.
inline double triangle_area(double a, double b, double c) {
  if (a < b) std::swap(a, b);
  if (b < c) std::swap(b, c);
  if (a < b) std::swap(a, b);
  // a >= b >= c
  const double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  if (!(p >= 0)) return std::numeric_limits<double>::quiet_NaN();
  return 0.25 * std::sqrt(p);
}

/// Interior angle opposite side `opposite` in a triangle whose other two sides
/// are `adj1` and `adj2`. Result in [0, pi]; NaN for invalid lengths.
inline double angle_from_lengths(double opposite, double adj1, double adj2) {
  double a = adj1, b = adj2;
  const double c = opposite;
  if (a < b) std::swap(a, b);
  double mu;
  if (b >= c) {
    mu = c - (a - b);
  } else {
    mu = b - (a - c);
  }
  const double num = ((a - b) + c) * mu;
  const double den = (a + (b + c)) * ((a - c) + b);
  if (!(num >= 0) || !(den >= 0)) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * std::atan2(std::sqrt(num), std::sqrt(den));
}

/// Cotangent of the angle opposite `opposite`, (adj1^2 + adj2^2 - opposite^2) / 4A.
inline double cot_from_lengths(double opposite, double adj1, double adj2) {
  const double area = triangle_area(opposite, adj1, adj2);
  return (adj1 * adj1 + adj2 * adj2 - opposite * opposite) / (4.0 * area);
}

/// Harmonic index (a^2 + b^2 + c^2) / A of a single triangle.
inline double triangle_harmonic_index(double a, double b, double c) {
  return (a * a + b * b + c * c) / triangle_area(a, b, c);
}

/// Squared circumradius (abc / 4A)^2.
inline double squared_circumradius(double a, double b, double c) {
  const double r = a * b * c / (4.0 * triangle_area(a, b, c));
  return r * r;
}

/// Places the apex of a triangle whose base runs from (0,0) to (base,0).
/// `from_start` and `from_end` are the apex distances to the two base
/// endpoints; the apex is returned in the upper half plane.
inline Vec2 layout_apex(double base, double from_start, double from_end) {
  const double x = (base * base + from_start * from_start - from_end * from_end) / (2.0 * base);
  const double y = 2.0 * triangle_area(base, from_start, from_end) / base;
  return {x, y};
}

/// Cross product z-component of (b - a) x (c - a).
inline double signed_area2(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

}  // namespace idtlab
