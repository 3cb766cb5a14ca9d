// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "generators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace idtlab;
using namespace idtlab::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int edge_between(const PiecewiseFlatSurface& s, int a, int b) {
  for (int e = 0; e < s.num_edges(); ++e) {
    const auto [i, j] = s.endpoints(e);
    if ((i == a && j == b) || (i == b && j == a)) return e;
  }
  return kNone;
}

Outcome cube_canonical() {
  Outcome o;
  const auto t0 = Clock::now();
  PiecewiseFlatSurface s = PiecewiseFlatSurface::from_embedding(shapes::cube());
  const FlipLog log = flip_to_delaunay(s);
  const WeightedGraph g = assemble(s);
  const TessellationCells cells = extract_tessellation(s);
  const double elapsed = seconds_since(t0);

  o.require(log.empty(), std::to_string(log.size()) + " flips");
  int unit = 0, diagonal = 0;
  double worst = 0;
  for (const WeightedEdge& e : g.edges) {
    const bool is_diagonal = std::abs(s.length(e.edge) - std::sqrt(2.0)) < 1e-12;
    (is_diagonal ? diagonal : unit) += 1;
    worst = std::max(worst, std::abs(e.weight - (is_diagonal ? 0.0 : 1.0)));
  }
  o.require(unit == 12 && diagonal == 6, "edge counts");
  o.require(worst <= 1e-12, fmt("weight error %.3g", worst));
  bool quads = cells.cells.size() == 6;
  for (const auto& c : cells.cells) quads = quads && c.boundary.size() == 4;
  o.require(quads, std::to_string(cells.cells.size()) + " cells");
  o.require(elapsed < 0.1, fmt("runtime %.3f s", elapsed));
  o.detail = o.pass ? fmt("0 flips, max weight error %.1e, 6 quad cells, %.4f s", worst, elapsed) : o.detail;
  return o;
}

Outcome kite_canonical() {
  Outcome o;
  PiecewiseFlatSurface s = PiecewiseFlatSurface::from_embedding(shapes::kite());
  const int ac = edge_between(s, 0, 2);
  const double w_before = edge_weight(s, ac);
  const double hrm_before = harmonic_index(s);
  const FlipLog log = flip_to_delaunay(s);
  const double hrm_after = harmonic_index(s);
  const int bd = edge_between(s, 1, 3);
  o.require(log.size() == 1, std::to_string(log.size()) + " flips");
  o.require(bd != kNone, "BD missing");
  if (!o.pass) return o;
  const double w_after = edge_weight(s, bd);
  o.require(std::abs(s.length(bd) - std::sqrt(5.0)) <= 1e-12, fmt("new length %.17g", s.length(bd)));
  o.require(std::abs(w_before + 0.25) <= 1e-12, fmt("weight of AC %.17g", w_before));
  o.require(std::abs(w_after - 0.25) <= 1e-12, fmt("weight of BD %.17g", w_after));
  o.require(hrm_after < hrm_before, fmt("hrm %.17g -> %.17g", hrm_before, hrm_after));
  if (o.pass) o.detail = fmt("1 flip, |BD| = %.15f, hrm %.6g -> %.6g", s.length(bd), hrm_before, hrm_after);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  Rng rng(1003);
  std::uniform_int_distribution<int> count(4, 40);
  double slowest = 0;
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const auto t0 = Clock::now();
    const auto pts = shapes::random_points(rng, count(rng));
    const EmbeddedMesh m = shapes::fan_triangulation(pts);
    PiecewiseFlatSurface s = PiecewiseFlatSurface::from_embedding(m);
    flip_to_delaunay(s);
    std::vector<Vec2> flat;
    for (const Vec3& x : m.positions) flat.push_back(x.head<2>());
    if (!oracle::matches(oracle::planar_delaunay(flat), edge_set(s))) ++mismatches;
    slowest = std::max(slowest, seconds_since(t0));
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  o.require(slowest < 1.0, fmt("slowest instance %.3f s", slowest));
  if (o.pass) o.detail = fmt("100/100 identical, slowest instance %.4f s", slowest);
  return o;
}

Outcome monotone_termination() {
  Outcome o;
  Rng rng(1004);
  int flips = 0, increases = 0, planar = 0, cone = 0, unflippable = 0, second_run = 0;
  for (int instance = 0; flips < 1000 || instance < 40; ++instance) {
    PiecewiseFlatSurface s = instance % 2 == 0
                                 ? PiecewiseFlatSurface::from_embedding(random_non_delaunay_disk(rng, 25))
                                 : random_closed_cone_surface(rng, 1 + instance % 3, 200);
    (instance % 2 == 0 ? planar : cone) += 1;

    PiecewiseFlatSurface copy = s;
    flip_to_delaunay(copy);
    if (!flip_to_delaunay(copy).empty()) ++second_run;

    for (;;) {
      std::vector<int> bad;
      for (int e = 0; e < s.num_edges(); ++e)
        if (!s.is_boundary_edge(e) && !is_locally_delaunay(s, e, kDefaultEpsW)) bad.push_back(e);
      if (bad.empty()) break;
      const int e = bad[std::uniform_int_distribution<std::size_t>(0, bad.size() - 1)(rng)];
      if (!is_flippable(s, e)) {
        ++unflippable;
        break;
      }
      const double before = local_harmonic_index(s, e);
      flip_edge(s, e);
      const double after = local_harmonic_index(s, e);
      ++flips;
      if (!(after < before)) ++increases;
    }
  }
  o.require(increases == 0, std::to_string(increases) + " flips without strict decrease");
  o.require(unflippable == 0, std::to_string(unflippable) + " non-Delaunay edges not flippable");
  o.require(second_run == 0, std::to_string(second_run) + " second runs flipped");
  if (o.pass)
    o.detail = std::to_string(flips) + " flips on " + std::to_string(planar) + " planar and " + std::to_string(cone) +
               " cone surfaces, all strictly decreasing; second runs flip nothing";
  return o;
}

Outcome rippa_formula() {
  Outcome o;
  Rng rng(1005);
  double worst = 0, most_negative = 0;
  int sign_checks = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto q = random_convex_quad(rng);
    const auto [t1, t2] = oracle::quad_energies(q);
    const double d = oracle::rippa_difference(q);
    worst = std::max(worst, mixed_error(d, t1 - t2));
    const auto& p = q.points;
    if (oracle::incircle(p[0], p[1], p[3], p[2]) <= 0) {
      ++sign_checks;
      most_negative = std::min(most_negative, d);
    }
  }
  o.require(worst <= 1e-9, fmt("max error %.3g", worst));
  o.require(most_negative >= 0, fmt("negative difference %.3g", most_negative));
  if (o.pass)
    o.detail = fmt("max abs+rel error %.1e; %d sign checks, min difference %.3g", worst, sign_checks, most_negative);
  return o;
}

Outcome musin_identity() {
  Outcome o;
  Rng rng(1006);
  std::uniform_int_distribution<int> count(4, 60);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const EmbeddedMesh m = random_well_shaped_triangulation(rng, count(rng));
    worst = std::max(worst, relative_error(hat_energy_sum(m), harmonic_index(PiecewiseFlatSurface::from_embedding(m)) / 8));
  }
  o.require(worst <= 1e-9, fmt("max relative error %.3g", worst));
  if (o.pass) o.detail = fmt("100 triangulations with face quality > 1e-3, max relative error %.1e", worst);
  return o;
}

Outcome linear_precision() {
  Outcome o;
  Rng rng(1007);
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0;
  std::size_t violations = 0;
  int fields = 0;
  const std::vector<EmbeddedMesh> grids{shapes::grid(2, 2), shapes::grid(8, 5, 0.5), shapes::grid(20, 20, 0.05),
                                        shapes::triangular_grid(6, 6), shapes::triangular_grid(15, 9)};
  for (const EmbeddedMesh& m : grids) {
    const IntrinsicOperator op = intrinsic_operator(m);
    const auto interior = interior_vertices(op.surface);
    for (int k = 0; k < 5; ++k) {
      const double a = u(rng), b = u(rng), c = u(rng);
      auto linear = [&](int v) { return a * m.positions[v].x() + b * m.positions[v].y() + c; };
      BoundaryData<double> bc;
      for (int v = 0; v < m.num_vertices(); ++v)
        if (op.surface.is_boundary_vertex(v)) bc[v] = linear(v);
      const auto f = solve_dirichlet(op.graph, bc);
      for (int v : interior) worst = std::max(worst, std::abs(f[v] - linear(v)));
      violations += check_harmonic_hull<double>(op.graph, f, interior).size();
      ++fields;
    }
  }
  // Non-linear data on curved disks: the maximum principle still holds.
  std::normal_distribution<double> n;
  for (int k = 0; k < 20; ++k) {
    const EmbeddedMesh m = random_bumpy_disk(rng, 40);
    const IntrinsicOperator op = intrinsic_operator(m);
    BoundaryData<double> bc;
    BoundaryData<Vec3> bv;
    for (int v = 0; v < m.num_vertices(); ++v)
      if (op.surface.is_boundary_vertex(v)) {
        bc[v] = n(rng);
        bv[v] = Vec3(n(rng), n(rng), n(rng));
      }
    const auto interior = interior_vertices(op.surface);
    violations += check_harmonic_hull<double>(op.graph, solve_dirichlet(op.graph, bc), interior).size();
    violations += check_harmonic_hull<Vec3>(op.graph, solve_dirichlet(op.graph, bv), interior).size();
    fields += 2;
  }
  o.require(worst <= 1e-9, fmt("max interior error %.3g", worst));
  o.require(violations == 0, std::to_string(violations) + " hull violations");
  if (o.pass) o.detail = fmt("max interior error %.1e; %d harmonic fields, 0 hull violations", worst, fields);
  return o;
}

Outcome weight_signs() {
  Outcome o;
  Rng rng(1008);
  int without_negative = 0, negative_after = 0, closed = 0;
  double min_after = 0;
  for (int i = 0; i < 100; ++i) {
    PiecewiseFlatSurface s;
    do {
      if (i % 3 == 0) s = PiecewiseFlatSurface::from_embedding(random_non_delaunay_disk(rng, 30));
      else if (i % 3 == 1) s = PiecewiseFlatSurface::from_embedding(random_bumpy_disk(rng, 30, 0.5));
      else s = random_closed_cone_surface(rng, 1 + i % 2);
    } while (is_delaunay(s));
    closed += static_cast<int>(interior_edges(s).size()) == s.num_edges();
    // A boundary edge has one opposite angle and is never flipped, so the sign law concerns interior edges.
    double before = 0;
    for (int e : interior_edges(s)) before = std::min(before, edge_weight(s, e));
    if (!(before < 0)) ++without_negative;
    flip_to_delaunay(s);
    double after = 0;
    for (int e : interior_edges(s)) after = std::min(after, edge_weight(s, e));
    if (after < -1e-12) ++negative_after;
    min_after = std::min(min_after, after);
  }
  o.require(without_negative == 0, std::to_string(without_negative) + " inputs without a negative weight");
  o.require(negative_after == 0, std::to_string(negative_after) + " outputs with a negative weight");
  if (o.pass)
    o.detail = fmt("100 inputs (%d closed) all had a negative interior weight; min interior weight after flipping %.2g",
                   closed, min_after);
  return o;
}

Outcome curvature() {
  Outcome o;
  const EmbeddedMesh grid = shapes::grid(10, 8, 0.3);
  const auto H = mean_curvature_vector(grid);
  const auto gs = PiecewiseFlatSurface::from_embedding(grid);
  double flat = 0;
  for (int v : interior_vertices(gs)) flat = std::max(flat, H[v].norm());
  o.require(flat <= 1e-12, fmt("flat grid |H| %.3g", flat));

  const double corner = (mean_curvature_vector(shapes::cube())[0] - Vec3(-1, -1, -1)).norm();
  o.require(corner <= 1e-12, fmt("cube corner error %.3g", corner));

  Rng rng(1009);
  std::vector<PiecewiseFlatSurface> surfaces{PiecewiseFlatSurface::from_embedding(shapes::cube()),
                                             PiecewiseFlatSurface::from_embedding(shapes::sphere(3))};
  for (int k = 0; k < 20; ++k) surfaces.push_back(random_closed_cone_surface(rng, 1 + k % 2, 80));
  double worst_sum = 0, min_area = std::numeric_limits<double>::infinity();
  for (PiecewiseFlatSurface& s : surfaces) {
    flip_to_delaunay(s);
    const auto area = voronoi_area(s);
    double sum = 0;
    for (double a : area) {
      sum += a;
      min_area = std::min(min_area, a);
    }
    worst_sum = std::max(worst_sum, relative_error(sum, s.total_area()));
  }
  o.require(min_area > 0, fmt("Voronoi area %.3g", min_area));
  o.require(worst_sum <= 1e-9, fmt("area sum error %.3g", worst_sum));
  if (o.pass)
    o.detail = fmt("flat |H| %.1e, cube corner error %.1e, area sum relative error %.1e", flat, corner, worst_sum);
  return o;
}

Outcome minimal_surface() {
  Outcome o;
  const EmbeddedMesh ring = shapes::ring_cylinder(12, 19);
  const auto t0 = Clock::now();
  const MinimalResult r = minimal_solve(ring, boundary_constraints(ring));
  const double elapsed = seconds_since(t0);

  int increases = 0;
  for (std::size_t k = 1; k < r.log.size(); ++k)
    if (r.log[k].energy > r.log[k - 1].energy * (1 + 1e-12)) ++increases;
  const IntrinsicOperator op = intrinsic_operator(r.mesh);
  const auto violations =
      check_harmonic_hull<Vec3>(op.graph, r.mesh.positions, interior_vertices(op.surface)).size();
  const int free = ring.num_vertices() - static_cast<int>(boundary_constraints(ring).size());
  const double last = r.log.empty() ? 0 : r.log.back().max_disp;

  o.require(r.converged && r.log.size() <= 200,
            fmt("not converged after %g iterations: max displacement %.3g > tol %.3g",
                static_cast<double>(r.log.size()), last, r.tol));
  o.require(increases == 0, std::to_string(increases) + " energy increases");
  o.require(violations == 0, std::to_string(violations) + " hull violations");
  o.require(elapsed < 30, fmt("runtime %.2f s", elapsed));
  const std::string summary = std::to_string(free) + " free vertices, " + std::to_string(r.log.size()) +
                              " iterations, " + std::to_string(increases) + " energy increases, " +
                              std::to_string(violations) + " hull violations, " + fmt("%.2f s", elapsed);
  o.detail = o.pass ? summary : o.detail + " (" + summary + ")";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"cube canonical", cube_canonical},
      {"kite canonical", kite_canonical},
      {"oracle equivalence", oracle_equivalence},
      {"monotone termination", monotone_termination},
      {"Rippa formula", rippa_formula},
      {"Musin identity", musin_identity},
      {"linear precision", linear_precision},
      {"weight-sign characterization", weight_signs},
      {"curvature", curvature},
      {"minimal surface", minimal_surface},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
