#pragma once

// Discrete mean curvature, circumcentric (Voronoi) vertex areas, the iterative
// minimal-surface solver and explicit mean-curvature-flow steps.
//
// H(x) = (L f)(x) with f the vertex positions and L the operator of the
// intrinsic Delaunay triangulation. With the positive semi-definite sign
// convention H points away from the concave side: at the corner of a cube it
// points outward. The flow therefore integrates x' = -H so convex bodies shrink.

#include "idtlab/errors.hpp"
#include "idtlab/idt.hpp"
#include "idtlab/laplace.hpp"
#include "idtlab/mesh.hpp"
#include "idtlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace idtlab {

/// Integrated mean curvature vector at every vertex.
inline VertexField<Vec3> mean_curvature_vector(const EmbeddedMesh& mesh, const FlipOptions& flip = {}) {
  const IntrinsicOperator op = intrinsic_operator(mesh, flip);
  return apply_laplace<Vec3>(op.graph, mesh.positions);
}

/// Area of the intrinsic circumcentric dual cell of every vertex:
/// A(x) = 1/8 sum over edges e at x of l_e^2 (cot a_e + cot b_e), boundary
/// edges contributing their single cotangent. Sums to the total area.
inline std::vector<double> voronoi_area(const PiecewiseFlatSurface& s, double eps_w = kDefaultEpsW) {
  if (!is_delaunay(s, eps_w))
    throw Error(ErrorKind::NotDelaunay, "Voronoi areas require an intrinsic Delaunay triangulation");
  std::vector<double> area(s.num_vertices(), 0.0);
  for (int h = 0; h < s.num_halfedges(); ++h) {
    const double l = s.halfedge_length(h);
    const double part = 0.125 * l * l * s.opposite_cot(h);
    area[s.origin(h)] += part;
    area[s.target(h)] += part;
  }
  return area;
}

struct CurvatureField {
  VertexField<Vec3> H;
  /// H / A per vertex; NaN where the Voronoi area is not positive.
  VertexField<Vec3> density;
  std::vector<double> area;
  int flips = 0;
};

inline CurvatureField curvature_field(const EmbeddedMesh& mesh, const FlipOptions& flip = {}) {
  const IntrinsicOperator op = intrinsic_operator(mesh, flip);
  CurvatureField out;
  out.flips = static_cast<int>(op.flips.size());
  out.H = apply_laplace<Vec3>(op.graph, mesh.positions);
  out.area = voronoi_area(op.surface, flip.eps_w);
  const double floor = kDegenerateAreaRatio * op.surface.total_area();
  out.density.resize(out.H.size());
  for (std::size_t v = 0; v < out.H.size(); ++v) {
    out.density[v] = out.area[v] > floor ? Vec3(out.H[v] / out.area[v])
                                         : Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

/// Mean curvature vector density H(x) / A(x).
inline VertexField<Vec3> mean_curvature_density(const EmbeddedMesh& mesh, const FlipOptions& flip = {}) {
  CurvatureField field = curvature_field(mesh, flip);
  for (std::size_t v = 0; v < field.density.size(); ++v)
    if (!field.density[v].allFinite())
      throw Error(ErrorKind::ZeroVoronoiArea,
                  "vertex " + std::to_string(v) + " has Voronoi area " + std::to_string(field.area[v]));
  return field.density;
}

// ---------------------------------------------------------------------------
// Minimal surfaces

struct MinimalOptions {
  /// Stop when no vertex moves farther than this; negative selects
  /// 1e-8 times the bounding-box diagonal of the input.
  double tol = -1;
  int max_iter = 200;
  FlipOptions flip;
  SolverOptions solver;
};

struct MinimalIteration {
  int iter = 0;
  /// Dirichlet energy of the new positions w.r.t. the weights they minimize.
  double energy = 0;
  double max_disp = 0;
  int flips = 0;
  double area = 0;
};

struct MinimalResult {
  EmbeddedMesh mesh;
  std::vector<MinimalIteration> log;
  bool converged = false;
  double tol = 0;
  /// max |H| over free vertices of the returned mesh.
  double residual = 0;
};

namespace detail {

inline IntrinsicOperator operator_or_collapse(const EmbeddedMesh& mesh, const FlipOptions& flip) {
  try {
    return intrinsic_operator(mesh, flip);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateFace) throw Error(ErrorKind::DegenerateCollapse, e.detail());
    throw;
  }
}

/// Vertex triples of the faces of `s`, or nothing when the triangulation is
/// not a simplicial complex (a face with a repeated vertex or two edges with
/// the same endpoints).
inline std::optional<std::vector<Face>> simplicial_faces(const PiecewiseFlatSurface& s) {
  std::set<std::pair<int, int>> seen;
  for (int e = 0; e < s.num_edges(); ++e) {
    const auto [a, b] = s.endpoints(e);
    if (a == b || !seen.insert(std::minmax(a, b)).second) return std::nullopt;
  }
  std::vector<Face> faces(s.num_faces());
  for (int f = 0; f < s.num_faces(); ++f) {
    const int h = s.face_halfedge(f);
    faces[f] = {s.origin(h), s.origin(s.next(h)), s.origin(s.prev(h))};
  }
  return faces;
}

inline std::vector<char> boundary_mask(const EmbeddedMesh& mesh) {
  const PiecewiseFlatSurface s = PiecewiseFlatSurface::from_embedding(mesh);
  std::vector<char> mask(s.num_vertices(), 0);
  for (int v = 0; v < s.num_vertices(); ++v) mask[v] = s.is_boundary_vertex(v);
  return mask;
}

}  // namespace detail

/// Fixes the boundary at the current positions.
inline BoundaryData<Vec3> boundary_constraints(const EmbeddedMesh& mesh) {
  BoundaryData<Vec3> fixed;
  const auto mask = detail::boundary_mask(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mask[v]) fixed[v] = mesh.positions[v];
  return fixed;
}

/// Iterates: intrinsic Delaunay triangulation of the current carrier, cotan
/// weights, harmonic positions with `fixed` vertices held at their targets.
/// The next surface is the image of the Delaunay triangulation, so its faces
/// are those of the triangulation the energy was minimized on; when that
/// triangulation is not a simplicial complex the previous faces are kept.
/// Returns with `converged == false` when `max_iter` is reached.
inline MinimalResult minimal_solve(const EmbeddedMesh& mesh, const BoundaryData<Vec3>& fixed,
                                   const MinimalOptions& opts = {}) {
  if (fixed.empty()) throw Error(ErrorKind::InvalidArgument, "at least one vertex must be fixed");
  const auto mask = detail::boundary_mask(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mask[v] && !fixed.count(v))
      throw Error(ErrorKind::InvalidArgument,
                  "boundary vertex " + std::to_string(v) + " is free; free boundaries are unsupported");

  MinimalResult result;
  result.mesh = mesh;
  result.tol = opts.tol < 0 ? 1e-8 * bounding_box_diagonal(mesh) : opts.tol;
  if (static_cast<int>(fixed.size()) == mesh.num_vertices()) {
    result.converged = true;
    return result;
  }

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const IntrinsicOperator op = detail::operator_or_collapse(result.mesh, opts.flip);
    VertexField<Vec3> next = solve_dirichlet<Vec3>(op.graph, fixed, opts.solver);

    MinimalIteration it;
    it.iter = iter;
    it.flips = static_cast<int>(op.flips.size());
    it.energy = dirichlet_energy<Vec3>(op.graph, next);
    for (int v = 0; v < mesh.num_vertices(); ++v)
      it.max_disp = std::max(it.max_disp, (next[v] - result.mesh.positions[v]).norm());
    result.mesh.positions = std::move(next);
    if (auto faces = detail::simplicial_faces(op.surface)) result.mesh.faces = std::move(*faces);
    it.area = surface_area(result.mesh);
    result.log.push_back(it);
    if (it.max_disp < result.tol) {
      result.converged = true;
      break;
    }
  }

  const IntrinsicOperator final_op = detail::operator_or_collapse(result.mesh, opts.flip);
  const auto H = apply_laplace<Vec3>(final_op.graph, result.mesh.positions);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!fixed.count(v)) result.residual = std::max(result.residual, H[v].norm());
  return result;
}

struct MinimalityReport {
  bool minimal = false;
  bool wide = false;
  /// Only meaningful when the narrow test was requested.
  bool narrow = false;
  double max_H = 0;
  int flips = 0;
  double min_slack = 0;
};

/// Wide test: max |H| over interior vertices <= eps. Narrow test: in addition
/// the mesh's own triangulation is strictly intrinsic Delaunay (no flips needed
/// and every interior angle sum below pi - eps_angle).
inline MinimalityReport is_minimal(const EmbeddedMesh& mesh, double eps, bool narrow, double eps_angle = 1e-9,
                                   const FlipOptions& flip = {}) {
  MinimalityReport r;
  PiecewiseFlatSurface carrier = PiecewiseFlatSurface::from_embedding(mesh);
  r.min_slack = min_delaunay_slack(carrier);
  const IntrinsicOperator op = intrinsic_operator(mesh, flip);
  r.flips = static_cast<int>(op.flips.size());
  const auto H = apply_laplace<Vec3>(op.graph, mesh.positions);
  for (int v = 0; v < carrier.num_vertices(); ++v)
    if (!carrier.is_boundary_vertex(v)) r.max_H = std::max(r.max_H, H[v].norm());
  r.wide = r.max_H <= eps;
  r.narrow = r.wide && r.flips == 0 && r.min_slack > eps_angle;
  r.minimal = narrow ? r.narrow : r.wide;
  return r;
}

// ---------------------------------------------------------------------------
// Mean curvature flow

struct FlowOptions {
  /// Integrate the density H / A (default) or the integrated H.
  bool use_density = true;
  /// Vertices held in place; boundary vertices are always held.
  std::set<int> fixed;
  FlipOptions flip;
};

struct FlowStep {
  EmbeddedMesh mesh;
  /// Flips needed to restore the intrinsic Delaunay property after the step.
  int flips = 0;
  /// Largest admissible dt at the start of the step.
  double dt_limit = 0;
};

/// Largest dt accepted by `mcf_step`: 0.25 * min A / max sum w for the density
/// flow, 0.25 / max sum w for the integrated flow, over free vertices.
inline double flow_dt_limit(const IntrinsicOperator& op, const std::vector<char>& free, bool use_density) {
  std::vector<double> wsum(op.graph.num_vertices, 0.0);
  for (const WeightedEdge& e : op.graph.edges) {
    if (e.i == e.j) continue;
    wsum[e.i] += std::abs(e.weight);
    wsum[e.j] += std::abs(e.weight);
  }
  const auto area = voronoi_area(op.surface);
  double min_area = std::numeric_limits<double>::infinity(), max_w = 0;
  for (int v = 0; v < op.graph.num_vertices; ++v) {
    if (!free[v]) continue;
    min_area = std::min(min_area, area[v]);
    max_w = std::max(max_w, wsum[v]);
  }
  if (max_w == 0) return std::numeric_limits<double>::infinity();
  return use_density ? 0.25 * min_area / max_w : 0.25 / max_w;
}

/// One explicit Euler step x <- x - dt * H_density(x) at free vertices.
inline FlowStep mcf_step(const EmbeddedMesh& mesh, double dt, const FlowOptions& opts = {}) {
  if (!(dt >= 0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidArgument, "dt must be non-negative");
  const IntrinsicOperator op = detail::operator_or_collapse(mesh, opts.flip);
  std::vector<char> free(mesh.num_vertices(), 1);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (op.surface.is_boundary_vertex(v) || opts.fixed.count(v)) free[v] = 0;

  FlowStep step;
  step.mesh = mesh;
  step.dt_limit = flow_dt_limit(op, free, opts.use_density);
  if (dt > step.dt_limit)
    throw Error(ErrorKind::InvalidArgument, "dt " + std::to_string(dt) + " exceeds the stability limit " +
                                                std::to_string(step.dt_limit));
  if (dt > 0) {
    const auto H = apply_laplace<Vec3>(op.graph, mesh.positions);
    const auto area = voronoi_area(op.surface, opts.flip.eps_w);
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      if (!free[v]) continue;
      const Vec3 velocity = opts.use_density ? Vec3(H[v] / area[v]) : H[v];
      step.mesh.positions[v] -= dt * velocity;
    }
  }
  step.flips = static_cast<int>(detail::operator_or_collapse(step.mesh, opts.flip).flips.size());
  return step;
}

}  // namespace idtlab
