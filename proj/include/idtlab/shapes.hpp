#pragma once

// Small mesh generators used by the tests, the samples and `idtlab verify`.

#include "idtlab/geometry.hpp"
#include "idtlab/mesh.hpp"
#include "idtlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

namespace idtlab::shapes {

/// Unit square with faces (0,1,2), (0,2,3).
inline EmbeddedMesh unit_square() {
  return {{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)}, {{0, 1, 2}, {0, 2, 3}}};
}

/// Kite A=(0,0), B=(2,0), C=(2,2), D=(0,1) split along the non-Delaunay diagonal AC.
inline EmbeddedMesh kite() {
  return {{Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(2, 2, 0), Vec3(0, 1, 0)}, {{0, 1, 2}, {0, 2, 3}}};
}

namespace detail {

/// Reorders each face so its normal points away from `center`.
inline void orient_outward(EmbeddedMesh& mesh, const Vec3& center) {
  for (Face& f : mesh.faces) {
    const Vec3& a = mesh.positions[f[0]];
    const Vec3 n = (mesh.positions[f[1]] - a).cross(mesh.positions[f[2]] - a);
    const Vec3 c = (a + mesh.positions[f[1]] + mesh.positions[f[2]]) / 3.0;
    if (n.dot(c - center) < 0) std::swap(f[1], f[2]);
  }
}

}  // namespace detail

/// Unit cube [0,1]^3, vertex index x + 2y + 4z, each square split by the
/// diagonal through its lowest-index corner. 8 vertices, 18 edges, 12 faces.
inline EmbeddedMesh cube() {
  EmbeddedMesh m;
  for (int v = 0; v < 8; ++v) m.positions.emplace_back(v & 1, (v >> 1) & 1, (v >> 2) & 1);
  const int quads[6][4] = {{0, 1, 3, 2}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    m.faces.push_back({q[0], q[1], q[2]});
    m.faces.push_back({q[0], q[2], q[3]});
  }
  detail::orient_outward(m, Vec3(0.5, 0.5, 0.5));
  return m;
}

/// Six unit equilateral triangles around vertex 0.
inline EmbeddedMesh hex_fan() {
  EmbeddedMesh m;
  m.positions.emplace_back(0, 0, 0);
  for (int k = 0; k < 6; ++k) m.positions.emplace_back(std::cos(k * kPi / 3), std::sin(k * kPi / 3), 0);
  for (int k = 0; k < 6; ++k) m.faces.push_back({0, 1 + k, 1 + (k + 1) % 6});
  return m;
}

/// Planar grid of nx by ny unit squares, vertex (i, j) at index j * (nx + 1) + i,
/// each square split along its (i, j)-(i+1, j+1) diagonal.
inline EmbeddedMesh grid(int nx, int ny, double spacing = 1.0) {
  EmbeddedMesh m;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.positions.emplace_back(i * spacing, j * spacing, 0);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return m;
}

/// Patch of the equilateral triangle lattice (strictly Delaunay).
inline EmbeddedMesh triangular_grid(int nx, int ny) {
  EmbeddedMesh m;
  const double h = std::sqrt(3.0) / 2;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.positions.emplace_back(i + 0.5 * (j % 2), j * h, 0);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (j % 2 == 0) {
        m.faces.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
        m.faces.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      } else {
        m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
    }
  }
  return m;
}

/// Open cylinder between two regular `segments`-gons of radius `radius` at
/// heights -half_height and +half_height, with `rows` rings in total (rows - 2
/// free interior rings). Ring r occupies indices [r * segments, (r+1) * segments).
inline EmbeddedMesh ring_cylinder(int segments, int rows, double radius = 1.0, double half_height = 0.4) {
  EmbeddedMesh m;
  for (int r = 0; r < rows; ++r) {
    const double z = -half_height + 2 * half_height * r / (rows - 1);
    for (int k = 0; k < segments; ++k) {
      const double a = 2 * kPi * k / segments;
      m.positions.emplace_back(radius * std::cos(a), radius * std::sin(a), z);
    }
  }
  for (int r = 0; r + 1 < rows; ++r) {
    for (int k = 0; k < segments; ++k) {
      const int a = r * segments + k, b = r * segments + (k + 1) % segments;
      const int c = a + segments, d = b + segments;
      m.faces.push_back({a, b, d});
      m.faces.push_back({a, d, c});
    }
  }
  return m;
}

/// Octahedron subdivided `levels` times and projected to the unit sphere.
inline EmbeddedMesh sphere(int levels) {
  EmbeddedMesh m;
  m.positions = {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
  m.faces = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  for (int l = 0; l < levels; ++l) {
    std::vector<Face> faces;
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = mid.find({key.first, key.second});
      if (it != mid.end()) return it->second;
      const int id = m.num_vertices();
      m.positions.push_back((m.positions[a] + m.positions[b]).normalized());
      mid[{key.first, key.second}] = id;
      return id;
    };
    for (const Face& f : m.faces) {
      const int ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
      faces.push_back({f[0], ab, ca});
      faces.push_back({ab, f[1], bc});
      faces.push_back({ca, bc, f[2]});
      faces.push_back({ab, bc, ca});
    }
    m.faces = std::move(faces);
  }
  return m;
}

/// Triangulation of the convex hull of `points` (z = 0) that is deliberately
/// far from Delaunay: the hull is fanned from its first vertex and interior
/// points are inserted by splitting their containing triangle. Points that
/// fall on an existing edge are dropped, so the result may use fewer vertices.
inline EmbeddedMesh fan_triangulation(const std::vector<Vec2>& points) {
  const int n = static_cast<int>(points.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return points[a].x() < points[b].x() || (points[a].x() == points[b].x() && points[a].y() < points[b].y());
  });
  // Andrew's monotone chain, strictly convex hull in counter-clockwise order.
  std::vector<int> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (int idx : order) {
      while (hull.size() >= base + 2 &&
             oracle::orient2d(points[hull[hull.size() - 2]], points[hull.back()], points[idx]) <= 0)
        hull.pop_back();
      hull.push_back(idx);
    }
    hull.pop_back();
    std::reverse(order.begin(), order.end());
  }

  std::vector<Face> tris;
  for (std::size_t i = 1; i + 1 < hull.size(); ++i) tris.push_back({hull[0], hull[i], hull[i + 1]});
  std::vector<char> on_hull(n, 0);
  for (int h : hull) on_hull[h] = 1;

  std::vector<char> used(n, 0);
  for (int h : hull) used[h] = 1;
  for (int p = 0; p < n; ++p) {
    if (on_hull[p]) continue;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      const Face f = tris[t];
      const int o0 = oracle::orient2d(points[f[0]], points[f[1]], points[p]);
      const int o1 = oracle::orient2d(points[f[1]], points[f[2]], points[p]);
      const int o2 = oracle::orient2d(points[f[2]], points[f[0]], points[p]);
      if (o0 < 0 || o1 < 0 || o2 < 0) continue;
      if (o0 > 0 && o1 > 0 && o2 > 0) {
        tris[t] = {f[0], f[1], p};
        tris.push_back({f[1], f[2], p});
        tris.push_back({f[2], f[0], p});
        used[p] = 1;
      }
      break;
    }
  }

  // Compact to the used vertices.
  EmbeddedMesh m;
  std::vector<int> remap(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!used[i]) continue;
    remap[i] = m.num_vertices();
    m.positions.emplace_back(points[i].x(), points[i].y(), 0.0);
  }
  for (const Face& f : tris) m.faces.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
  return m;
}

/// `n` uniform random points in the unit square.
template <class Rng>
std::vector<Vec2> random_points(Rng& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> pts(n);
  for (Vec2& p : pts) p = Vec2(u(rng), u(rng));
  return pts;
}

}  // namespace idtlab::shapes
