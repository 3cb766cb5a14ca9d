#pragma once

// Independent reference computations used to cross-check the intrinsic
// pipeline: Rippa's energy comparison for a convex quad, brute-force
// piecewise-linear Dirichlet energies, and a planar Delaunay triangulation
// built from exact orientation and incircle predicates.
//
// Nothing here depends on the halfedge surface or the flip code.

#include "idtlab/errors.hpp"
#include "idtlab/geometry.hpp"

#include <Eigen/LU>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace idtlab::oracle {

// ---------------------------------------------------------------------------
// Piecewise-linear energies

/// Dirichlet energy of the linear interpolant of `f` on the planar triangle
/// `p`: 1/4 sum_i cot(angle_i) (f_{i+1} - f_{i+2})^2, cotangents from
/// dot and cross products.
inline double pl_energy(const std::array<Vec2, 3>& p, const std::array<double, 3>& f) {
  double e = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec2 u = p[(i + 1) % 3] - p[i];
    const Vec2 v = p[(i + 2) % 3] - p[i];
    const double cross = std::abs(u.x() * v.y() - u.y() * v.x());
    if (!(cross > 0)) throw Error(ErrorKind::DegenerateFace, "triangle has zero area");
    const double cot = u.dot(v) / cross;
    const double d = f[(i + 1) % 3] - f[(i + 2) % 3];
    e += cot * d * d;
  }
  return 0.25 * e;
}

/// Same energy from side lengths, `lengths[i]` being the side opposite corner i.
inline double pl_energy(const std::array<double, 3>& lengths, const std::array<double, 3>& f) {
  const double a = lengths[0], b = lengths[1], c = lengths[2];
  const double s = 0.5 * (a + b + c);
  const double area2 = s * (s - a) * (s - b) * (s - c);
  if (!(area2 > 0)) throw Error(ErrorKind::DegenerateFace, "side lengths do not form a triangle");
  const double area = std::sqrt(area2);
  double e = 0;
  for (int i = 0; i < 3; ++i) {
    const double opp = lengths[i];
    const double l1 = lengths[(i + 1) % 3];
    const double l2 = lengths[(i + 2) % 3];
    const double cot = (l1 * l1 + l2 * l2 - opp * opp) / (4 * area);
    const double d = f[(i + 1) % 3] - f[(i + 2) % 3];
    e += cot * d * d;
  }
  return 0.25 * e;
}

/// 1/2 |grad f|^2 A computed from the explicit gradient of the interpolant.
inline double gradient_energy(const std::array<Vec2, 3>& p, const std::array<double, 3>& f) {
  Eigen::Matrix2d J;
  J.col(0) = p[1] - p[0];
  J.col(1) = p[2] - p[0];
  const double det = J.determinant();
  if (!(std::abs(det) > 0)) throw Error(ErrorKind::DegenerateFace, "triangle has zero area");
  const Eigen::Vector2d df(f[1] - f[0], f[2] - f[0]);
  // grad^T J = df^T
  const Eigen::Vector2d grad = J.transpose().fullPivLu().solve(df);
  return 0.5 * grad.squaredNorm() * 0.5 * std::abs(det);
}

// ---------------------------------------------------------------------------
// Rippa's comparison formula

/// Convex quad x1..x4 with diagonals x1x3 (triangulation T1) and x2x4 (T2).
struct QuadConfig {
  std::array<Vec2, 4> points;
  std::array<double, 4> values{};
  /// Distances from the diagonal intersection x0 to x1..x4.
  std::array<double, 4> r{};
  /// Angle between the diagonals, in (0, pi).
  double theta = 0;
  /// Values at x0 of the interpolants on T1 and T2.
  double f1 = 0;
  double f2 = 0;

  /// Derives r, theta, f1, f2 from four points in convex cyclic order.
  static QuadConfig from_points(const std::array<Vec2, 4>& pts, const std::array<double, 4>& values) {
    QuadConfig q;
    q.points = pts;
    q.values = values;
    const Vec2 d13 = pts[2] - pts[0];
    const Vec2 d24 = pts[3] - pts[1];
    const double denom = d13.x() * d24.y() - d13.y() * d24.x();
    if (denom == 0) throw Error(ErrorKind::InvalidArgument, "quad diagonals are parallel");
    const Vec2 w = pts[1] - pts[0];
    // x1 + s d13 = x2 + u d24
    const double s = (w.x() * d24.y() - w.y() * d24.x()) / denom;
    const double u = (w.x() * d13.y() - w.y() * d13.x()) / denom;
    if (!(s > 0 && s < 1 && u > 0 && u < 1))
      throw Error(ErrorKind::InvalidArgument, "quad is not strictly convex");
    const double n13 = d13.norm(), n24 = d24.norm();
    q.r = {s * n13, u * n24, (1 - s) * n13, (1 - u) * n24};
    q.theta = std::acos(std::clamp(d13.dot(d24) / (n13 * n24), -1.0, 1.0));
    q.f1 = (values[0] * q.r[2] + values[2] * q.r[0]) / (q.r[0] + q.r[2]);
    q.f2 = (values[1] * q.r[3] + values[3] * q.r[1]) / (q.r[1] + q.r[3]);
    return q;
  }
};

/// E(f_T1) - E(f_T2) via Rippa's closed form, normalized for E = 1/2 int |grad f|^2;
/// Rippa's roughness integral is 2E.
inline double rippa_difference(const QuadConfig& q) {
  const auto& r = q.r;
  const double df = q.f1 - q.f2;
  return df * df / (4 * std::sin(q.theta)) * (r[0] + r[2]) * (r[1] + r[3]) / (r[0] * r[1] * r[2] * r[3]) *
         (r[0] * r[2] - r[1] * r[3]);
}

/// Brute-force energies of the two triangulations of a quad.
inline std::pair<double, double> quad_energies(const QuadConfig& q) {
  const auto& p = q.points;
  const auto& f = q.values;
  const double t1 = pl_energy({p[0], p[1], p[2]}, {f[0], f[1], f[2]}) + pl_energy({p[0], p[2], p[3]}, {f[0], f[2], f[3]});
  const double t2 = pl_energy({p[0], p[1], p[3]}, {f[0], f[1], f[3]}) + pl_energy({p[1], p[2], p[3]}, {f[1], f[2], f[3]});
  return {t1, t2};
}

// ---------------------------------------------------------------------------
// Exact predicates

namespace detail {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kEpsilon = std::numeric_limits<double>::epsilon() / 2;  // 2^-53

inline int sign_of(const Rational& r) { return r.sign(); }

}  // namespace detail

/// Sign of the orientation of (a, b, c): +1 counter-clockwise, -1 clockwise,
/// 0 collinear. A floating-point filter decides easy cases; the rest is
/// evaluated in exact rational arithmetic.
inline int orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double left = (a.x() - c.x()) * (b.y() - c.y());
  const double right = (a.y() - c.y()) * (b.x() - c.x());
  const double det = left - right;
  const double bound = (3.0 + 16.0 * detail::kEpsilon) * detail::kEpsilon * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  using R = detail::Rational;
  const R ax(a.x()), ay(a.y()), bx(b.x()), by(b.y()), cx(c.x()), cy(c.y());
  return detail::sign_of((ax - cx) * (by - cy) - (ay - cy) * (bx - cx));
}

/// Positive if d lies inside the circle through (a, b, c) given in
/// counter-clockwise order, negative outside, zero on the circle.
inline int incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) + clift * (adx * bdy - bdx * ady);
  const double permanent = (std::abs(bdx * cdy) + std::abs(cdx * bdy)) * alift +
                           (std::abs(cdx * ady) + std::abs(adx * cdy)) * blift +
                           (std::abs(adx * bdy) + std::abs(bdx * ady)) * clift;
  const double bound = (10.0 + 96.0 * detail::kEpsilon) * detail::kEpsilon * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  using R = detail::Rational;
  const R dx(d.x()), dy(d.y());
  const R eadx = R(a.x()) - dx, eady = R(a.y()) - dy;
  const R ebdx = R(b.x()) - dx, ebdy = R(b.y()) - dy;
  const R ecdx = R(c.x()) - dx, ecdy = R(c.y()) - dy;
  const R ea = eadx * eadx + eady * eady;
  const R eb = ebdx * ebdx + ebdy * ebdy;
  const R ec = ecdx * ecdx + ecdy * ecdy;
  return detail::sign_of(ea * (ebdx * ecdy - ecdx * ebdy) + eb * (ecdx * eady - eadx * ecdy) +
                         ec * (eadx * ebdy - ebdx * eady));
}

// ---------------------------------------------------------------------------
// Planar Delaunay reference

using EdgeKey = std::pair<int, int>;

inline EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

struct PlanarDelaunay {
  /// A Delaunay triangulation: every required edge plus a maximal
  /// non-crossing subset of the optional ones.
  std::set<EdgeKey> edges;
  /// Edges of the Delaunay tessellation, present in every Delaunay triangulation.
  std::set<EdgeKey> required;
  /// Diagonals of cocircular cells; any non-crossing choice is valid.
  std::set<EdgeKey> optional;
  bool has_ties() const { return !optional.empty(); }
};

namespace detail {

inline bool segments_cross(std::span<const Vec2> p, const EdgeKey& e, const EdgeKey& g) {
  if (e.first == g.first || e.first == g.second || e.second == g.first || e.second == g.second) return false;
  const Vec2 &a = p[e.first], &b = p[e.second], &c = p[g.first], &d = p[g.second];
  return orient2d(a, b, c) * orient2d(a, b, d) < 0 && orient2d(c, d, a) * orient2d(c, d, b) < 0;
}

}  // namespace detail

/// Delaunay triangulation of the convex hull of `points` by exhaustive empty
/// circumcircle tests over all vertex triples (O(n^4)).
inline PlanarDelaunay planar_delaunay(std::span<const Vec2> points) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw Error(ErrorKind::CollinearInput, "at least three points are required");

  std::set<EdgeKey> candidates;
  bool any_triangle = false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const int o = orient2d(points[i], points[j], points[k]);
        if (o == 0) continue;
        any_triangle = true;
        const int a = i, b = o > 0 ? j : k, c = o > 0 ? k : j;
        bool empty = true;
        for (int m = 0; m < n && empty; ++m) {
          if (m == a || m == b || m == c) continue;
          if (incircle(points[a], points[b], points[c], points[m]) > 0) empty = false;
        }
        if (!empty) continue;
        candidates.insert(edge_key(i, j));
        candidates.insert(edge_key(j, k));
        candidates.insert(edge_key(i, k));
      }
    }
  }
  if (!any_triangle) throw Error(ErrorKind::CollinearInput, "all points are collinear");

  PlanarDelaunay out;
  for (const EdgeKey& e : candidates) {
    bool crossed = false;
    for (const EdgeKey& g : candidates) {
      if (detail::segments_cross(points, e, g)) {
        crossed = true;
        break;
      }
    }
    (crossed ? out.optional : out.required).insert(e);
  }
  out.edges = out.required;
  for (const EdgeKey& e : out.optional) {
    bool ok = true;
    for (const EdgeKey& g : out.edges)
      if (detail::segments_cross(points, e, g)) {
        ok = false;
        break;
      }
    if (ok) out.edges.insert(e);
  }
  return out;
}

/// True iff `edges` is one of the Delaunay triangulations described by `ref`.
inline bool matches(const PlanarDelaunay& ref, const std::set<EdgeKey>& edges) {
  for (const EdgeKey& e : ref.required)
    if (!edges.count(e)) return false;
  for (const EdgeKey& e : edges)
    if (!ref.required.count(e) && !ref.optional.count(e)) return false;
  return edges.size() == ref.edges.size();
}

}  // namespace idtlab::oracle
