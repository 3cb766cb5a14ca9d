#pragma once

// Randomized self-check of the core algorithms against the brute-force oracles.

#include "idtlab/geometry.hpp"
#include "idtlab/idt.hpp"
#include "idtlab/oracle.hpp"
#include "idtlab/shapes.hpp"
#include "idtlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace idtlab {

struct VerifyOptions {
  std::uint64_t seed = 1;
  int quads = 1000;
  int triangles = 1000;
  int triangulations = 100;
  int max_points = 40;
  double tol = 1e-9;
};

struct CheckResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  double max_error = 0;
  bool passed() const { return failures == 0; }
};

/// abs+rel agreement: |a - b| <= tol * (1 + max(|a|, |b|)).
inline double mixed_error(double a, double b) { return std::abs(a - b) / (1 + std::max(std::abs(a), std::abs(b))); }

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0 : std::abs(a - b) / scale;
}

/// Random strictly convex counterclockwise quad: four points at sorted random
/// angles on a jittered circle.
template <class Rng>
oracle::QuadConfig random_convex_quad(Rng& rng) {
  std::uniform_real_distribution<double> angle(0, 2 * kPi), radius(0.5, 1.5), value(-1, 1), shift(-2, 2);
  for (;;) {
    std::array<double, 4> phi;
    for (double& p : phi) p = angle(rng);
    std::sort(phi.begin(), phi.end());
    const Vec2 c(shift(rng), shift(rng));
    std::array<Vec2, 4> pts;
    for (int k = 0; k < 4; ++k) {
      const double r = radius(rng);
      pts[k] = c + r * Vec2(std::cos(phi[k]), std::sin(phi[k]));
    }
    if (oracle::orient2d(pts[0], pts[1], pts[2]) < 0) std::swap(pts[1], pts[3]);
    std::array<double, 4> f;
    for (double& v : f) v = value(rng);
    try {
      return oracle::QuadConfig::from_points(pts, f);
    } catch (const Error&) {
    }
  }
}

/// Random triangle with all angles above ~1 degree.
template <class Rng>
std::array<Vec2, 3> random_triangle(Rng& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  for (;;) {
    const std::array<Vec2, 3> p{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))};
    const double a = (p[1] - p[2]).norm(), b = (p[2] - p[0]).norm(), c = (p[0] - p[1]).norm();
    const double area = triangle_area(a, b, c);
    if (area > 0.01 * std::max({a, b, c}) * std::max({a, b, c})) return p;
  }
}

inline std::set<oracle::EdgeKey> edge_set(const PiecewiseFlatSurface& s) {
  std::set<oracle::EdgeKey> out;
  for (int e = 0; e < s.num_edges(); ++e) {
    const auto [a, b] = s.endpoints(e);
    out.insert(oracle::edge_key(a, b));
  }
  return out;
}

/// Smallest face area divided by the squared longest edge of that face.
inline double min_face_quality(const EmbeddedMesh& m) {
  double q = std::numeric_limits<double>::infinity();
  for (const Face& f : m.faces) {
    double l = 0;
    for (int k = 0; k < 3; ++k) l = std::max(l, (m.positions[f[k]] - m.positions[f[(k + 1) % 3]]).norm());
    q = std::min(q, face_area(m, f) / (l * l));
  }
  return q;
}

/// Fan triangulation of n random points, redrawn until every face clears
/// min_quality. Areas recovered from rounded lengths lose about eps / quality
/// relative accuracy, so slivers cannot resolve identities at 1e-9.
template <class Rng>
EmbeddedMesh random_well_shaped_triangulation(Rng& rng, int n, double min_quality = 1e-3) {
  for (;;) {
    EmbeddedMesh m = shapes::fan_triangulation(shapes::random_points(rng, n));
    if (min_face_quality(m) > min_quality) return m;
  }
}

/// Sum over vertices of the PL energy of the hat function of that vertex.
inline double hat_energy_sum(const EmbeddedMesh& m) {
  double sum = 0;
  for (const Face& f : m.faces) {
    const std::array<Vec2, 3> p{m.positions[f[0]].head<2>(), m.positions[f[1]].head<2>(),
                                m.positions[f[2]].head<2>()};
    sum += oracle::pl_energy(p, {1, 0, 0}) + oracle::pl_energy(p, {0, 1, 0}) + oracle::pl_energy(p, {0, 0, 1});
  }
  return sum;
}

inline std::vector<CheckResult> run_verification(const VerifyOptions& opts = {}) {
  std::mt19937_64 rng(opts.seed);
  std::vector<CheckResult> out;

  CheckResult rippa{"rippa_formula"}, sign{"rippa_sign"};
  for (int i = 0; i < opts.quads; ++i) {
    const oracle::QuadConfig q = random_convex_quad(rng);
    const auto [e1, e2] = oracle::quad_energies(q);
    const double d = oracle::rippa_difference(q);
    const double err = mixed_error(d, e1 - e2);
    rippa.max_error = std::max(rippa.max_error, err);
    ++rippa.trials;
    if (err > opts.tol) ++rippa.failures;
    // x2x4 is Delaunay iff x3 is not inside the circle through x1, x2, x4.
    const auto& p = q.points;
    if (oracle::incircle(p[0], p[1], p[3], p[2]) <= 0) {
      ++sign.trials;
      if (d < -opts.tol) ++sign.failures;
      sign.max_error = std::max(sign.max_error, std::max(0.0, -d));
    }
  }
  out.push_back(rippa);
  out.push_back(sign);

  CheckResult hrm{"harmonic_index_identity"};
  for (int i = 0; i < opts.triangles; ++i) {
    const auto p = random_triangle(rng);
    const double a = (p[1] - p[2]).norm(), b = (p[2] - p[0]).norm(), c = (p[0] - p[1]).norm();
    const double cots = cot_from_lengths(a, b, c) + cot_from_lengths(b, c, a) + cot_from_lengths(c, a, b);
    const double err = relative_error(triangle_harmonic_index(a, b, c), 4 * cots);
    hrm.max_error = std::max(hrm.max_error, err);
    ++hrm.trials;
    if (err > opts.tol) ++hrm.failures;
  }
  out.push_back(hrm);

  CheckResult musin{"musin_identity"}, equiv{"oracle_equivalence"};
  std::uniform_int_distribution<int> count(4, std::max(4, opts.max_points));
  for (int i = 0; i < opts.triangulations; ++i) {
    const EmbeddedMesh shaped = random_well_shaped_triangulation(rng, count(rng));
    const double err = relative_error(hat_energy_sum(shaped), harmonic_index(PiecewiseFlatSurface::from_embedding(shaped)) / 8);
    musin.max_error = std::max(musin.max_error, err);
    ++musin.trials;
    if (err > opts.tol) ++musin.failures;

    const EmbeddedMesh mesh = shapes::fan_triangulation(shapes::random_points(rng, count(rng)));
    PiecewiseFlatSurface s = PiecewiseFlatSurface::from_embedding(mesh);
    flip_to_delaunay(s);
    std::vector<Vec2> flat;
    for (const Vec3& x : mesh.positions) flat.push_back(x.head<2>());
    ++equiv.trials;
    if (!oracle::matches(oracle::planar_delaunay(flat), edge_set(s))) ++equiv.failures;
  }
  out.push_back(musin);
  out.push_back(equiv);
  return out;
}

}  // namespace idtlab
