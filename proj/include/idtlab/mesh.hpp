#pragma once

#include "idtlab/geometry.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace idtlab {

using Face = std::array<int, 3>;

/// Triangle mesh embedded in R^3: vertex positions plus vertex-index triples.
struct EmbeddedMesh {
  std::vector<Vec3> positions;
  std::vector<Face> faces;

  int num_vertices() const { return static_cast<int>(positions.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
};

/// sqrt(dx^2 + dy^2 + dz^2), evaluated in that order.
inline double euclidean_distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double face_area(const EmbeddedMesh& mesh, const Face& f) {
  const Vec3& a = mesh.positions[f[0]];
  const Vec3& b = mesh.positions[f[1]];
  const Vec3& c = mesh.positions[f[2]];
  return 0.5 * (b - a).cross(c - a).norm();
}

inline double surface_area(const EmbeddedMesh& mesh) {
  double total = 0;
  for (const Face& f : mesh.faces) total += face_area(mesh, f);
  return total;
}

inline double bounding_box_diagonal(const EmbeddedMesh& mesh) {
  if (mesh.positions.empty()) return 0;
  Vec3 lo = mesh.positions.front(), hi = mesh.positions.front();
  for (const Vec3& p : mesh.positions) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

inline EmbeddedMesh translated(EmbeddedMesh mesh, const Vec3& offset) {
  for (Vec3& p : mesh.positions) p += offset;
  return mesh;
}

inline EmbeddedMesh scaled(EmbeddedMesh mesh, double factor) {
  for (Vec3& p : mesh.positions) p *= factor;
  return mesh;
}

}  // namespace idtlab
