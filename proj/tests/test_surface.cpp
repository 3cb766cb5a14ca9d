#include "support.hpp"

#include <algorithm>
#include <cmath>

using namespace idtlab;
using namespace idtlab::testing;

namespace {

std::vector<double> sorted_lengths(const PiecewiseFlatSurface& s) {
  std::vector<double> out;
  for (int e = 0; e < s.num_edges(); ++e) out.push_back(s.length(e));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(FromEmbedding, UnitSquareLengths) {
  const auto s = surface(shapes::unit_square());
  EXPECT_EQ(s.num_vertices(), 4);
  EXPECT_EQ(s.num_faces(), 2);
  ASSERT_EQ(s.num_edges(), 5);
  const auto l = sorted_lengths(s);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(l[i], 1.0);
  EXPECT_DOUBLE_EQ(l[4], std::sqrt(2.0));
  EXPECT_FALSE(s.is_boundary_edge(find_edge(s, 0, 2)));
  EXPECT_TRUE(s.is_boundary_edge(find_edge(s, 0, 1)));
}

TEST(FromEmbedding, CubeHasTwelveUnitAndSixDiagonalEdges) {
  const auto s = surface(shapes::cube());
  ASSERT_EQ(s.num_edges(), 18);
  const auto l = sorted_lengths(s);
  EXPECT_EQ(std::count(l.begin(), l.end(), 1.0), 12);
  EXPECT_EQ(std::count(l.begin(), l.end(), std::sqrt(2.0)), 6);
  EXPECT_FALSE(s.has_boundary());
  EXPECT_EQ(s.euler_characteristic(), 2);
}

TEST(FromEmbedding, RepeatedVertexIsDegenerate) {
  EmbeddedMesh m{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {{0, 0, 1}}};
  try {
    surface(m);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateFace);
  }
}

TEST(FromEmbedding, CollinearFaceIsDegenerate) {
  EmbeddedMesh m{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)}, {{0, 1, 2}}};
  try {
    surface(m);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateFace);
  }
}

TEST(FromEmbedding, EdgeWithThreeFacesIsNonManifold) {
  EmbeddedMesh m{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0), Vec3(0, 0, 1)},
                 {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}};
  try {
    surface(m);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonManifoldInput);
  }
}

TEST(FromEmbedding, BowtieVertexIsNonManifold) {
  EmbeddedMesh m{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(-1, 0, 0), Vec3(0, -1, 0)},
                 {{0, 1, 2}, {0, 3, 4}}};
  try {
    surface(m);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonManifoldInput);
  }
}

TEST(FromEmbedding, LengthsAreBitExactDistances) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const EmbeddedMesh m = random_bumpy_disk(rng, 25);
    const auto s = surface(m);
    for (int e = 0; e < s.num_edges(); ++e) {
      const auto [a, b] = s.endpoints(e);
      const Vec3 d = m.positions[a] - m.positions[b];
      EXPECT_EQ(s.length(e), std::sqrt(d.x() * d.x() + d.y() * d.y() + d.z() * d.z()));
    }
  }
}

TEST(FromEmbedding, IntrinsicAreaMatchesEmbeddedArea) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const EmbeddedMesh m = random_bumpy_disk(rng, 30);
    const double a = surface(m).total_area(), b = surface_area(m);
    EXPECT_LE(std::abs(a - b), 1e-12 * b);
  }
  EXPECT_NEAR(surface(shapes::cube()).total_area(), 6.0, 1e-12);
}

TEST(CornerAngle, Equilateral) {
  const std::array<Face, 1> faces{{{0, 1, 2}}};
  const std::array<std::array<double, 3>, 1> lengths{{{1, 1, 1}}};
  const auto s = PiecewiseFlatSurface::from_face_lengths(3, faces, lengths);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(corner_angle(s, {0, k}), kPi / 3, 1e-15);
}

TEST(CornerAngle, RightIsoscelesOppositeHypotenuse) {
  // Sides (0,1) = 1, (1,2) = sqrt 2, (2,0) = 1: the corner at vertex 0 faces the hypotenuse.
  const std::array<Face, 1> faces{{{0, 1, 2}}};
  const std::array<std::array<double, 3>, 1> lengths{{{1, std::sqrt(2.0), 1}}};
  const auto s = PiecewiseFlatSurface::from_face_lengths(3, faces, lengths);
  EXPECT_NEAR(corner_angle(s, {0, 0}), kPi / 2, 1e-15);
  EXPECT_NEAR(corner_angle(s, {0, 1}), kPi / 4, 1e-15);
}

TEST(CornerAngle, KiteTriangleCornerAtB) {
  const auto s = surface(shapes::kite());
  // Face 0 is (A, B, C); slot 1 is B.
  EXPECT_NEAR(corner_angle(s, {0, 1}), kPi / 2, 1e-15);
  const Vec2 ba(-2, 0), bc(0, 2);
  EXPECT_NEAR(corner_angle(s, {0, 1}), std::abs(std::atan2(ba.x() * bc.y() - ba.y() * bc.x(), ba.dot(bc))), 1e-15);
}

TEST(CornerAngle, FaceAnglesSumToPi) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_closed_cone_surface(rng, 1, 60);
    for (int f = 0; f < s.num_faces(); ++f) {
      const double sum = corner_angle(s, {f, 0}) + corner_angle(s, {f, 1}) + corner_angle(s, {f, 2});
      EXPECT_NEAR(sum, kPi, 1e-9 * kPi);
    }
  }
}

TEST(ConeAngle, FlatHexagonalFanHub) { EXPECT_NEAR(cone_angle(surface(shapes::hex_fan()), 0), 2 * kPi, 1e-12); }

TEST(ConeAngle, CubeCorner) {
  const auto s = surface(shapes::cube());
  for (int v = 0; v < 8; ++v) EXPECT_NEAR(cone_angle(s, v), 1.5 * kPi, 1e-12);
}

TEST(ConeAngle, SquareBoundaryCorner) {
  const auto s = surface(shapes::unit_square());
  EXPECT_NEAR(cone_angle(s, 0), kPi / 2, 1e-15);
  EXPECT_NEAR(cone_angle(s, 1), kPi / 2, 1e-15);
  EXPECT_TRUE(s.is_boundary_vertex(1));
}

TEST(Validate, Cube) {
  const auto d = validate(surface(shapes::cube()));
  EXPECT_TRUE(d.triangle_inequality_violations.empty());
  EXPECT_TRUE(d.nonmanifold_edges.empty());
  EXPECT_NEAR(d.total_area, 6.0, 1e-12);
  EXPECT_EQ(d.cone_points.size(), 8u);
  EXPECT_EQ(d.num_components, 1);
  EXPECT_TRUE(d.ok());
}

TEST(Validate, TriangleInequalityViolation) {
  const std::array<Face, 1> faces{{{0, 1, 2}}};
  const std::array<std::array<double, 3>, 1> lengths{{{1, 1, 3}}};
  const auto d = validate(PiecewiseFlatSurface::from_face_lengths(3, faces, lengths));
  ASSERT_EQ(d.triangle_inequality_violations.size(), 1u);
  EXPECT_EQ(d.triangle_inequality_violations[0], 0);
  EXPECT_FALSE(d.ok());
}

TEST(Validate, DisconnectedWarning) {
  EmbeddedMesh m{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(5, 0, 0), Vec3(6, 0, 0), Vec3(5, 1, 0)},
                 {{0, 1, 2}, {3, 4, 5}}};
  const auto d = validate(surface(m));
  EXPECT_EQ(d.num_components, 2);
  EXPECT_FALSE(d.warnings.empty());
  EXPECT_FALSE(d.ok());
}

TEST(Validate, FlatDiskHasNoConePoints) {
  const auto d = validate(surface(shapes::grid(4, 3)));
  EXPECT_TRUE(d.cone_points.empty());
  EXPECT_EQ(d.euler_characteristic, 1);
}

TEST(Surface, HalfedgeCombinatoricsAreConsistent) {
  Rng rng(10);
  const auto s = surface(random_bumpy_disk(rng, 30));
  for (int h = 0; h < s.num_halfedges(); ++h) {
    EXPECT_EQ(s.next(s.next(s.next(h))), h);
    EXPECT_EQ(s.face(s.next(h)), s.face(h));
    const int t = s.twin(h);
    if (t != kNone) {
      EXPECT_EQ(s.twin(t), h);
      EXPECT_EQ(s.origin(t), s.target(h));
      EXPECT_EQ(s.edge(t), s.edge(h));
    }
  }
}
