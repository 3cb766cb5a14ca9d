#pragma once

// Piecewise flat surfaces stored as delta complexes.
//
// Halfedges are the primitive: each face is a 3-cycle of halfedges and each
// interior edge pairs two halfedges through `twin`. Nothing requires the two
// sides of an edge to belong to different faces or an edge to join distinct
// vertices, so the non-regular triangulations produced by intrinsic flips are
// representable. Geometry is carried solely by one length per edge.

#include "idtlab/errors.hpp"
#include "idtlab/geometry.hpp"
#include "idtlab/mesh.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace idtlab {

inline constexpr int kNone = -1;

/// A corner of a face: the vertex at the origin of the `slot`-th halfedge of
/// the face cycle (slot 0 is the face's representative halfedge).
struct Corner {
  int face = kNone;
  int slot = 0;
};

/// Relative tolerance below which a face counts as degenerate:
/// area < kDegenerateAreaRatio * (longest side)^2.
inline constexpr double kDegenerateAreaRatio = 1e-14;

class PiecewiseFlatSurface {
 public:
  PiecewiseFlatSurface() = default;

  /// Builds the intrinsic surface of an embedded mesh. Edge lengths are the
  /// Euclidean distances between endpoint positions.
  static PiecewiseFlatSurface from_embedding(const EmbeddedMesh& mesh);

  /// Builds a surface from vertex triples and per-face side lengths, where
  /// `lengths[f][k]` is the length of side (faces[f][k], faces[f][k+1]).
  /// Shared sides must agree. The triangle inequality is not enforced here;
  /// `validate` reports violations.
  static PiecewiseFlatSurface from_face_lengths(int num_vertices, std::span<const Face> faces,
                                                std::span<const std::array<double, 3>> lengths);

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edge_length_.size()); }
  int num_faces() const { return static_cast<int>(face_halfedge_.size()); }
  int num_halfedges() const { return static_cast<int>(next_.size()); }

  int next(int h) const { return next_[h]; }
  int prev(int h) const { return next_[next_[h]]; }
  int twin(int h) const { return twin_[h]; }
  int origin(int h) const { return origin_[h]; }
  int target(int h) const { return origin_[next_[h]]; }
  int edge(int h) const { return edge_[h]; }
  int face(int h) const { return face_[h]; }
  int edge_halfedge(int e) const { return edge_halfedge_[e]; }
  int face_halfedge(int f) const { return face_halfedge_[f]; }

  bool is_boundary_edge(int e) const { return twin_[edge_halfedge_[e]] == kNone; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }
  bool has_boundary() const;

  std::array<int, 2> endpoints(int e) const {
    const int h = edge_halfedge_[e];
    return {origin(h), target(h)};
  }

  double length(int e) const { return edge_length_[e]; }
  double halfedge_length(int h) const { return edge_length_[edge_[h]]; }

  /// Halfedge at position `slot` of the face cycle.
  int corner_halfedge(Corner c) const;

  /// Interior angle at the origin of `h` inside face(h).
  double corner_angle(int h) const {
    return angle_from_lengths(halfedge_length(next(h)), halfedge_length(h), halfedge_length(prev(h)));
  }
  /// Angle in face(h) opposite the side carried by `h`.
  double opposite_angle(int h) const { return corner_angle(prev(h)); }
  double opposite_cot(int h) const {
    return cot_from_lengths(halfedge_length(h), halfedge_length(next(h)), halfedge_length(prev(h)));
  }

  std::array<double, 3> face_lengths(int f) const {
    const int h = face_halfedge_[f];
    return {halfedge_length(h), halfedge_length(next(h)), halfedge_length(prev(h))};
  }
  double face_area(int f) const {
    const auto l = face_lengths(f);
    return triangle_area(l[0], l[1], l[2]);
  }
  double total_area() const;

  /// Sum of incident corner angles at every vertex.
  std::vector<double> cone_angles() const;

  int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }

  /// Rewires the two faces adjacent to interior edge `e` so that `e` becomes
  /// the other diagonal of their quadrilateral, and assigns `new_length`.
  /// Purely combinatorial: callers check flippability and compute the length.
  void flip_combinatorics(int e, double new_length);

  /// Outgoing halfedges grouped by origin vertex.
  std::vector<std::vector<int>> outgoing_halfedges() const;

 private:
  static PiecewiseFlatSurface build(int num_vertices, std::span<const Face> faces);
  void detect_boundary();

  int num_vertices_ = 0;
  std::vector<int> next_, twin_, origin_, edge_, face_;
  std::vector<int> edge_halfedge_, face_halfedge_;
  std::vector<double> edge_length_;
  std::vector<bool> boundary_vertex_;
};

/// Angle at a face corner, from the three intrinsic side lengths.
inline double corner_angle(const PiecewiseFlatSurface& s, Corner c) {
  return s.corner_angle(s.corner_halfedge(c));
}

/// Total angle around `v`. At interior vertices a value other than 2*pi marks
/// a cone point; at boundary vertices it is the interior boundary angle.
inline double cone_angle(const PiecewiseFlatSurface& s, int v) {
  double sum = 0;
  for (int h = 0; h < s.num_halfedges(); ++h)
    if (s.origin(h) == v) sum += s.corner_angle(h);
  return sum;
}

/// Diagnostics for a surface. Report-only; never throws.
struct SurfaceDiagnostics {
  int num_vertices = 0;
  int num_edges = 0;
  int num_faces = 0;
  int euler_characteristic = 0;
  int num_components = 0;
  int num_boundary_edges = 0;
  double total_area = 0;
  std::vector<int> triangle_inequality_violations;  // face ids
  std::vector<int> nonmanifold_edges;               // edge ids
  std::vector<int> nonmanifold_vertices;            // vertex ids
  std::vector<int> cone_points;                     // interior vertex ids
  std::vector<std::string> warnings;

  bool ok() const {
    return triangle_inequality_violations.empty() && nonmanifold_edges.empty() &&
           nonmanifold_vertices.empty() && num_components <= 1;
  }
};

inline constexpr double kConeAngleTolerance = 1e-9;

inline SurfaceDiagnostics validate(const PiecewiseFlatSurface& s, double angle_tol = kConeAngleTolerance);

// ---------------------------------------------------------------------------

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

/// Number of outgoing halfedges of `v` reachable by rotating around `v` from
/// `start`. Equals the vertex degree (in corners) iff the link is connected.
inline int fan_size(const PiecewiseFlatSurface& s, int start) {
  int count = 0;
  int h = start;
  bool hit_boundary = false;
  do {
    ++count;
    const int t = s.twin(s.prev(h));
    if (t == kNone) {
      hit_boundary = true;
      break;
    }
    h = t;
  } while (h != start);
  if (hit_boundary) {
    h = start;
    while (s.twin(h) != kNone) {
      h = s.next(s.twin(h));
      if (h == start) break;
      ++count;
    }
  }
  return count;
}

}  // namespace detail

inline PiecewiseFlatSurface PiecewiseFlatSurface::build(int num_vertices, std::span<const Face> faces) {
  PiecewiseFlatSurface s;
  s.num_vertices_ = num_vertices;
  const int nf = static_cast<int>(faces.size());
  const int nh = 3 * nf;
  s.next_.resize(nh);
  s.twin_.assign(nh, kNone);
  s.origin_.resize(nh);
  s.edge_.assign(nh, kNone);
  s.face_.resize(nh);
  s.face_halfedge_.resize(nf);

  std::map<std::pair<int, int>, int> directed;
  std::map<std::pair<int, int>, int> undirected_count;
  for (int f = 0; f < nf; ++f) {
    const Face& fv = faces[f];
    for (int k = 0; k < 3; ++k) {
      if (fv[k] < 0 || fv[k] >= num_vertices)
        throw Error(ErrorKind::InvalidArgument,
                    "face " + std::to_string(f) + " references vertex " + std::to_string(fv[k]) +
                        " outside [0, " + std::to_string(num_vertices) + ")");
    }
    if (fv[0] == fv[1] || fv[1] == fv[2] || fv[0] == fv[2])
      throw Error(ErrorKind::DegenerateFace, "face " + std::to_string(f) + " repeats a vertex");
    for (int k = 0; k < 3; ++k) {
      const int h = 3 * f + k;
      s.origin_[h] = fv[k];
      s.next_[h] = 3 * f + (k + 1) % 3;
      s.face_[h] = f;
      const int a = fv[k], b = fv[(k + 1) % 3];
      const auto key = std::minmax(a, b);
      if (++undirected_count[{key.first, key.second}] > 2)
        throw Error(ErrorKind::NonManifoldInput, "edge (" + std::to_string(key.first) + ", " +
                                                     std::to_string(key.second) +
                                                     ") has more than two incident faces");
      if (!directed.emplace(std::pair{a, b}, h).second)
        throw Error(ErrorKind::NonManifoldInput, "edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                                     ") is used twice in the same direction "
                                                     "(inconsistent face orientation)");
    }
    s.face_halfedge_[f] = 3 * f;
  }

  for (int h = 0; h < nh; ++h) {
    if (s.edge_[h] != kNone) continue;
    const int e = static_cast<int>(s.edge_halfedge_.size());
    s.edge_halfedge_.push_back(h);
    s.edge_[h] = e;
    const auto it = directed.find({s.origin_[s.next_[h]], s.origin_[h]});
    if (it != directed.end()) {
      s.twin_[h] = it->second;
      s.twin_[it->second] = h;
      s.edge_[it->second] = e;
    }
  }
  s.edge_length_.assign(s.edge_halfedge_.size(), 0.0);
  s.detect_boundary();
  return s;
}

inline void PiecewiseFlatSurface::detect_boundary() {
  boundary_vertex_.assign(num_vertices_, false);
  for (int h = 0; h < num_halfedges(); ++h) {
    if (twin_[h] == kNone) {
      boundary_vertex_[origin(h)] = true;
      boundary_vertex_[target(h)] = true;
    }
  }
}

inline PiecewiseFlatSurface PiecewiseFlatSurface::from_embedding(const EmbeddedMesh& mesh) {
  PiecewiseFlatSurface s = build(mesh.num_vertices(), mesh.faces);
  for (int e = 0; e < s.num_edges(); ++e) {
    const auto [a, b] = s.endpoints(e);
    s.edge_length_[e] = euclidean_distance(mesh.positions[a], mesh.positions[b]);
  }
  for (int f = 0; f < s.num_faces(); ++f) {
    const auto l = s.face_lengths(f);
    const double longest = std::max({l[0], l[1], l[2]});
    const double area = triangle_area(l[0], l[1], l[2]);
    if (!(area >= kDegenerateAreaRatio * longest * longest))
      throw Error(ErrorKind::DegenerateFace, "face " + std::to_string(f) + " has area " +
                                                 std::to_string(area) + " below tolerance");
  }
  const auto out = s.outgoing_halfedges();
  for (int v = 0; v < s.num_vertices(); ++v) {
    if (!out[v].empty() && detail::fan_size(s, out[v].front()) != static_cast<int>(out[v].size()))
      throw Error(ErrorKind::NonManifoldInput,
                  "vertex " + std::to_string(v) + " has a disconnected link (non-manifold vertex)");
  }
  return s;
}

inline PiecewiseFlatSurface PiecewiseFlatSurface::from_face_lengths(
    int num_vertices, std::span<const Face> faces, std::span<const std::array<double, 3>> lengths) {
  if (lengths.size() != faces.size())
    throw Error(ErrorKind::InvalidArgument, "one length triple per face is required");
  PiecewiseFlatSurface s = build(num_vertices, faces);
  std::vector<bool> assigned(s.num_edges(), false);
  for (int f = 0; f < s.num_faces(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int e = s.edge_[3 * f + k];
      const double l = lengths[f][k];
      if (!(l > 0) || !std::isfinite(l))
        throw Error(ErrorKind::InvalidArgument, "edge lengths must be positive and finite");
      if (assigned[e] && s.edge_length_[e] != l)
        throw Error(ErrorKind::InvalidArgument,
                    "faces disagree on the length of edge " + std::to_string(e));
      s.edge_length_[e] = l;
      assigned[e] = true;
    }
  }
  return s;
}

inline bool PiecewiseFlatSurface::has_boundary() const {
  for (int t : twin_)
    if (t == kNone) return true;
  return false;
}

inline int PiecewiseFlatSurface::corner_halfedge(Corner c) const {
  int h = face_halfedge_.at(c.face);
  for (int k = 0; k < c.slot % 3; ++k) h = next_[h];
  return h;
}

inline double PiecewiseFlatSurface::total_area() const {
  double total = 0;
  for (int f = 0; f < num_faces(); ++f) total += face_area(f);
  return total;
}

inline std::vector<double> PiecewiseFlatSurface::cone_angles() const {
  std::vector<double> angles(num_vertices_, 0.0);
  for (int h = 0; h < num_halfedges(); ++h) angles[origin_[h]] += corner_angle(h);
  return angles;
}

inline std::vector<std::vector<int>> PiecewiseFlatSurface::outgoing_halfedges() const {
  std::vector<std::vector<int>> out(num_vertices_);
  for (int h = 0; h < num_halfedges(); ++h) out[origin_[h]].push_back(h);
  return out;
}

inline void PiecewiseFlatSurface::flip_combinatorics(int e, double new_length) {
  // Before: f1 = (h: i->j, h1: j->k, h2: k->i), f2 = (t: j->i, t1: i->l, t2: l->j).
  const int h = edge_halfedge_[e];
  const int t = twin_[h];
  const int h1 = next_[h], h2 = next_[h1];
  const int t1 = next_[t], t2 = next_[t1];
  const int f1 = face_[h], f2 = face_[t];
  const int k = origin_[h2], l = origin_[t2];

  // f1 = (t1: i->l, h: l->k, h2: k->i), f2 = (t2: l->j, h1: j->k, t: k->l)
  next_[t1] = h;
  next_[h] = h2;
  next_[h2] = t1;
  next_[t2] = h1;
  next_[h1] = t;
  next_[t] = t2;
  origin_[h] = l;
  origin_[t] = k;
  face_[t1] = f1;
  face_[h] = f1;
  face_[h2] = f1;
  face_[t2] = f2;
  face_[h1] = f2;
  face_[t] = f2;
  face_halfedge_[f1] = h;
  face_halfedge_[f2] = t;
  edge_length_[e] = new_length;
}

inline SurfaceDiagnostics validate(const PiecewiseFlatSurface& s, double angle_tol) {
  SurfaceDiagnostics d;
  d.num_vertices = s.num_vertices();
  d.num_edges = s.num_edges();
  d.num_faces = s.num_faces();
  d.euler_characteristic = s.euler_characteristic();

  bool area_valid = true;
  for (int f = 0; f < s.num_faces(); ++f) {
    const auto l = s.face_lengths(f);
    if (!satisfies_triangle_inequality(l[0], l[1], l[2])) {
      d.triangle_inequality_violations.push_back(f);
      area_valid = false;
    } else {
      d.total_area += triangle_area(l[0], l[1], l[2]);
    }
  }
  if (!area_valid) d.warnings.push_back("total area excludes faces violating the triangle inequality");

  for (int e = 0; e < s.num_edges(); ++e) {
    if (s.is_boundary_edge(e)) ++d.num_boundary_edges;
    const int h = s.edge_halfedge(e);
    const int t = s.twin(h);
    if (t != kNone && (s.twin(t) != h || s.origin(t) != s.target(h) || s.edge(t) != e))
      d.nonmanifold_edges.push_back(e);
  }

  detail::UnionFind uf(s.num_vertices());
  for (int e = 0; e < s.num_edges(); ++e) {
    const auto [a, b] = s.endpoints(e);
    uf.unite(a, b);
  }
  for (int v = 0; v < s.num_vertices(); ++v)
    if (uf.find(v) == v) ++d.num_components;
  if (d.num_components > 1)
    d.warnings.push_back("surface has " + std::to_string(d.num_components) + " connected components");

  const auto out = s.outgoing_halfedges();
  std::vector<double> cone(s.num_vertices(), 0.0);
  for (int v = 0; v < s.num_vertices(); ++v) {
    if (out[v].empty()) {
      d.warnings.push_back("vertex " + std::to_string(v) + " is isolated");
      continue;
    }
    if (detail::fan_size(s, out[v].front()) != static_cast<int>(out[v].size()))
      d.nonmanifold_vertices.push_back(v);
    if (!area_valid) continue;
    for (int h : out[v]) cone[v] += s.corner_angle(h);
    if (!s.is_boundary_vertex(v) && std::abs(cone[v] - 2 * kPi) > angle_tol) d.cone_points.push_back(v);
  }
  return d;
}

}  // namespace idtlab
