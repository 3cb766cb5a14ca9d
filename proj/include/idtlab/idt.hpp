#pragma once

// Intrinsic Delaunay machinery: the local Delaunay predicate, intrinsic edge
// flips, the flip-to-Delaunay algorithm, the harmonic index and extraction of
// the Delaunay tessellation.

#include "idtlab/errors.hpp"
#include "idtlab/geometry.hpp"
#include "idtlab/surface.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace idtlab {

/// Default tolerance on cot(alpha) + cot(beta) below which an edge is flipped.
inline constexpr double kDefaultEpsW = 1e-12;

struct FlipRecord {
  int edge = kNone;
  std::array<int, 2> old_endpoints{kNone, kNone};
  std::array<int, 2> new_endpoints{kNone, kNone};
  double old_length = 0;
  double new_length = 0;
  int ordinal = 0;
};

using FlipLog = std::vector<FlipRecord>;

namespace detail {

inline void require_interior(const PiecewiseFlatSurface& s, int e) {
  if (e < 0 || e >= s.num_edges())
    throw Error(ErrorKind::InvalidArgument, "edge " + std::to_string(e) + " does not exist");
  if (s.is_boundary_edge(e))
    throw Error(ErrorKind::BoundaryEdge, "edge " + std::to_string(e) + " lies on the boundary");
}

/// cot(alpha) + cot(beta) for the angles opposite interior edge `e`.
inline double opposite_cot_sum(const PiecewiseFlatSurface& s, int e) {
  const int h = s.edge_halfedge(e);
  return s.opposite_cot(h) + s.opposite_cot(s.twin(h));
}

}  // namespace detail

/// Sum of the two angles opposite interior edge `e`.
inline double opposite_angle_sum(const PiecewiseFlatSurface& s, int e) {
  detail::require_interior(s, e);
  const int h = s.edge_halfedge(e);
  return s.opposite_angle(h) + s.opposite_angle(s.twin(h));
}

/// An interior edge is locally Delaunay iff its opposite angles sum to at most pi.
inline bool is_locally_delaunay(const PiecewiseFlatSurface& s, int e, double eps = 0.0) {
  return opposite_angle_sum(s, e) <= kPi + eps;
}

/// True iff the two sides of `e` lie in distinct faces and the quadrilateral
/// they form unfolds to a strictly convex quad at both endpoints of `e`.
inline bool is_flippable(const PiecewiseFlatSurface& s, int e) {
  detail::require_interior(s, e);
  const int h = s.edge_halfedge(e);
  const int t = s.twin(h);
  if (s.face(h) == s.face(t)) return false;
  const double at_origin = s.corner_angle(h) + s.corner_angle(s.next(t));
  const double at_target = s.corner_angle(t) + s.corner_angle(s.next(h));
  return at_origin < kPi && at_target < kPi;
}

/// Length of the other diagonal of the quad around interior edge `e`, measured
/// after laying both triangles out in the plane on either side of `e`.
inline double flipped_length(const PiecewiseFlatSurface& s, int e) {
  const int h = s.edge_halfedge(e);
  const int t = s.twin(h);
  const double base = s.length(e);
  // h: i->j with apex k above the x-axis; t: j->i with apex l below.
  const Vec2 k = layout_apex(base, s.halfedge_length(s.prev(h)), s.halfedge_length(s.next(h)));
  Vec2 l = layout_apex(base, s.halfedge_length(s.next(t)), s.halfedge_length(s.prev(t)));
  l.y() = -l.y();
  return (k - l).norm();
}

/// Replaces interior edge `e` by the other diagonal of its quadrilateral.
/// The edge keeps its id.
inline FlipRecord flip_edge(PiecewiseFlatSurface& s, int e, int ordinal = 0) {
  if (!is_flippable(s, e))
    throw Error(ErrorKind::NotFlippable, "edge " + std::to_string(e) + " cannot be flipped");
  FlipRecord rec;
  rec.edge = e;
  rec.old_endpoints = s.endpoints(e);
  rec.old_length = s.length(e);
  rec.new_length = flipped_length(s, e);
  rec.ordinal = ordinal;
  if (!(rec.new_length > 0) || !std::isfinite(rec.new_length))
    throw Error(ErrorKind::NotFlippable, "edge " + std::to_string(e) + " would get a degenerate length");
  s.flip_combinatorics(e, rec.new_length);
  rec.new_endpoints = s.endpoints(e);
  return rec;
}

struct FlipOptions {
  double eps_w = kDefaultEpsW;
  /// Budget on the number of flips; negative selects 100 * (number of edges).
  long max_flips = -1;
  /// Called after every flip.
  std::function<void(const PiecewiseFlatSurface&, const FlipRecord&)> on_flip;
};

/// Flips non-Delaunay edges until every interior edge is locally Delaunay.
///
/// An edge is flipped when cot(alpha) + cot(beta) < -eps_w, so cocircular
/// configurations are left alone. Edges are processed from a FIFO queue seeded
/// with all interior edges in id order; after each flip the four sides of the
/// quad are re-enqueued. Boundary edges are never touched.
inline FlipLog flip_to_delaunay(PiecewiseFlatSurface& s, const FlipOptions& opts = {}) {
  const long budget = opts.max_flips < 0 ? 100L * s.num_edges() : opts.max_flips;
  std::deque<int> queue;
  std::vector<char> queued(s.num_edges(), 0);
  for (int e = 0; e < s.num_edges(); ++e) {
    if (!s.is_boundary_edge(e)) {
      queue.push_back(e);
      queued[e] = 1;
    }
  }

  FlipLog log;
  while (!queue.empty()) {
    const int e = queue.front();
    queue.pop_front();
    queued[e] = 0;
    if (!(detail::opposite_cot_sum(s, e) < -opts.eps_w)) continue;
    if (static_cast<long>(log.size()) >= budget)
      throw Error(ErrorKind::FlipBudgetExceeded,
                  "flip budget of " + std::to_string(budget) + " exhausted");

    log.push_back(flip_edge(s, e, static_cast<int>(log.size()) + 1));
    if (opts.on_flip) opts.on_flip(s, log.back());

    const int h = s.edge_halfedge(e);
    const int t = s.twin(h);
    for (int side : {s.next(h), s.prev(h), s.next(t), s.prev(t)}) {
      const int se = s.edge(side);
      if (!s.is_boundary_edge(se) && !queued[se]) {
        queue.push_back(se);
        queued[se] = 1;
      }
    }
  }
  return log;
}

/// min over interior edges of (pi - alpha - beta); +inf without interior edges.
inline double min_delaunay_slack(const PiecewiseFlatSurface& s) {
  double slack = std::numeric_limits<double>::infinity();
  for (int e = 0; e < s.num_edges(); ++e)
    if (!s.is_boundary_edge(e)) slack = std::min(slack, kPi - opposite_angle_sum(s, e));
  return slack;
}

inline bool is_delaunay(const PiecewiseFlatSurface& s, double eps_w = kDefaultEpsW) {
  for (int e = 0; e < s.num_edges(); ++e)
    if (!s.is_boundary_edge(e) && detail::opposite_cot_sum(s, e) < -eps_w) return false;
  return true;
}

/// Sum over faces of (a^2 + b^2 + c^2) / A.
inline double harmonic_index(const PiecewiseFlatSurface& s) {
  double total = 0;
  for (int f = 0; f < s.num_faces(); ++f) {
    const auto l = s.face_lengths(f);
    const double area = triangle_area(l[0], l[1], l[2]);
    if (!(area > 0))
      throw Error(ErrorKind::DegenerateFace, "face " + std::to_string(f) + " has no positive area");
    total += (l[0] * l[0] + l[1] * l[1] + l[2] * l[2]) / area;
  }
  return total;
}

/// Sum of squared circumradii over faces. Diagnostic only.
inline double squared_circumradii_sum(const PiecewiseFlatSurface& s) {
  double total = 0;
  for (int f = 0; f < s.num_faces(); ++f) {
    const auto l = s.face_lengths(f);
    total += squared_circumradius(l[0], l[1], l[2]);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Delaunay tessellation

struct CellSide {
  int vertex = kNone;  // origin of the side
  int edge = kNone;
};

struct TessellationCell {
  std::vector<int> faces;
  /// Sides in cyclic order around the cell.
  std::vector<CellSide> boundary;
};

struct TessellationCells {
  std::vector<TessellationCell> cells;
  std::vector<int> face_cell;
  std::vector<char> merged_edge;
  double merge_eps = 0;
};

/// Default merge tolerance: 1e-10 times the mean absolute cotan weight.
inline double default_merge_eps(const PiecewiseFlatSurface& s) {
  double sum = 0;
  for (int e = 0; e < s.num_edges(); ++e) {
    const int h = s.edge_halfedge(e);
    const double w = s.is_boundary_edge(e) ? 0.5 * s.opposite_cot(h) : 0.5 * detail::opposite_cot_sum(s, e);
    sum += std::abs(w);
  }
  return s.num_edges() > 0 ? 1e-10 * sum / s.num_edges() : 0.0;
}

/// Merges faces across every interior edge whose cotan weight has magnitude
/// at most `merge_eps` (negative selects the default).
inline TessellationCells extract_tessellation(const PiecewiseFlatSurface& s, double merge_eps = -1) {
  TessellationCells out;
  out.merge_eps = merge_eps < 0 ? default_merge_eps(s) : merge_eps;
  out.merged_edge.assign(s.num_edges(), 0);

  detail::UnionFind uf(s.num_faces());
  for (int e = 0; e < s.num_edges(); ++e) {
    if (s.is_boundary_edge(e)) continue;
    const double w = 0.5 * detail::opposite_cot_sum(s, e);
    if (w < -out.merge_eps)
      throw Error(ErrorKind::NotDelaunay,
                  "edge " + std::to_string(e) + " has negative weight " + std::to_string(w));
    if (w <= out.merge_eps) {
      const int h = s.edge_halfedge(e);
      out.merged_edge[e] = 1;
      uf.unite(s.face(h), s.face(s.twin(h)));
    }
  }

  out.face_cell.assign(s.num_faces(), kNone);
  for (int f = 0; f < s.num_faces(); ++f) {
    const int root = uf.find(f);
    if (out.face_cell[root] == kNone) {
      out.face_cell[root] = static_cast<int>(out.cells.size());
      out.cells.emplace_back();
    }
    out.face_cell[f] = out.face_cell[root];
    out.cells[out.face_cell[f]].faces.push_back(f);
  }

  std::vector<char> visited(s.num_halfedges(), 0);
  for (TessellationCell& cell : out.cells) {
    for (int f : cell.faces) {
      int h0 = s.face_halfedge(f);
      for (int k = 0; k < 3; ++k, h0 = s.next(h0)) {
        if (visited[h0] || out.merged_edge[s.edge(h0)]) continue;
        int h = h0;
        do {
          visited[h] = 1;
          cell.boundary.push_back({s.origin(h), s.edge(h)});
          int g = s.next(h);
          while (out.merged_edge[s.edge(g)]) g = s.next(s.twin(g));
          h = g;
        } while (h != h0);
      }
    }
  }
  return out;
}

}  // namespace idtlab
