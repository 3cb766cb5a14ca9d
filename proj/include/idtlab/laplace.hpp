#pragma once

// Cotan weights, the discrete Laplace-Beltrami operator on the intrinsic
// Delaunay triangulation, Dirichlet energy, and boundary-value solvers.
//
// Sign convention: (L f)(x) = sum_j w(x, x_j) (f(x) - f(x_j)). The operator is
// positive semi-definite, i.e. the negative of the analysts' Laplacian.

#include "idtlab/errors.hpp"
#include "idtlab/geometry.hpp"
#include "idtlab/idt.hpp"
#include "idtlab/mesh.hpp"
#include "idtlab/surface.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace idtlab {

struct WeightedEdge {
  int i = kNone;
  int j = kNone;
  double weight = 0;
  int edge = kNone;  // edge id in the source triangulation
};

/// Symmetric edge weights over the edge set of a triangulation.
struct WeightedGraph {
  int num_vertices = 0;
  std::vector<WeightedEdge> edges;
};

/// Scalar (double) or vector (Vec3) function on vertices.
template <class T>
using VertexField = std::vector<T>;

/// Prescribed values on a subset of vertices, keyed by vertex index.
template <class T>
using BoundaryData = std::map<int, T>;

namespace detail {

template <class T>
struct FieldTraits;

template <>
struct FieldTraits<double> {
  static constexpr int kCols = 1;
  static double zero() { return 0.0; }
  static double sqnorm(double v) { return v * v; }
  static double get(double v, int) { return v; }
  static void set(double& v, int, double x) { v = x; }
  static bool finite(double v) { return std::isfinite(v); }
};

template <>
struct FieldTraits<Vec3> {
  static constexpr int kCols = 3;
  static Vec3 zero() { return Vec3::Zero(); }
  static double sqnorm(const Vec3& v) { return v.squaredNorm(); }
  static double get(const Vec3& v, int c) { return v[c]; }
  static void set(Vec3& v, int c, double x) { v[c] = x; }
  static bool finite(const Vec3& v) { return v.allFinite(); }
};

inline void require_face_valid(const PiecewiseFlatSurface& s, int f) {
  if (!(s.face_area(f) > 0))
    throw Error(ErrorKind::DegenerateFace, "face " + std::to_string(f) + " has no positive area");
}

}  // namespace detail

/// Cotan weight of edge `e`: (cot a + cot b) / 2 for interior edges and
/// cot a / 2 for boundary edges, with a, b the opposite angles. Valid on any
/// triangulation.
inline double edge_weight(const PiecewiseFlatSurface& s, int e) {
  const int h = s.edge_halfedge(e);
  detail::require_face_valid(s, s.face(h));
  if (s.is_boundary_edge(e)) return 0.5 * s.opposite_cot(h);
  const int t = s.twin(h);
  detail::require_face_valid(s, s.face(t));
  return 0.5 * (s.opposite_cot(h) + s.opposite_cot(t));
}

struct AssembleOptions {
  /// Reject triangulations with an interior weight below -eps_w.
  bool require_delaunay = true;
  double eps_w = kDefaultEpsW;
};

/// Assembles the weighted graph of the given triangulation. Zero-weight edges
/// are kept so that the edge set equals the triangulation's.
inline WeightedGraph assemble(const PiecewiseFlatSurface& s, const AssembleOptions& opts = {}) {
  WeightedGraph g;
  g.num_vertices = s.num_vertices();
  g.edges.reserve(s.num_edges());
  for (int e = 0; e < s.num_edges(); ++e) {
    const double w = edge_weight(s, e);
    if (opts.require_delaunay && !s.is_boundary_edge(e) && w < -opts.eps_w)
      throw Error(ErrorKind::NotDelaunay,
                  "edge " + std::to_string(e) + " has negative weight " + std::to_string(w));
    const auto [a, b] = s.endpoints(e);
    g.edges.push_back({a, b, w, e});
  }
  return g;
}

/// Result of running the intrinsic pipeline on an embedded mesh.
struct IntrinsicOperator {
  PiecewiseFlatSurface surface;  // intrinsic Delaunay triangulation
  FlipLog flips;
  WeightedGraph graph;
};

/// Builds the intrinsic surface, flips it to Delaunay and assembles weights.
/// With `use_input_triangulation` the flips are skipped and the input
/// triangulation's (possibly negative) weights are used instead.
inline IntrinsicOperator intrinsic_operator(const EmbeddedMesh& mesh, const FlipOptions& flip = {},
                                            bool use_input_triangulation = false) {
  IntrinsicOperator op{PiecewiseFlatSurface::from_embedding(mesh), {}, {}};
  if (!use_input_triangulation) op.flips = flip_to_delaunay(op.surface, flip);
  AssembleOptions a;
  a.require_delaunay = !use_input_triangulation;
  a.eps_w = flip.eps_w;
  op.graph = assemble(op.surface, a);
  return op;
}

/// (L f)(x_i) = sum_j w_ij (f_i - f_j) at every vertex.
template <class T>
VertexField<T> apply_laplace(const WeightedGraph& g, std::span<const T> f) {
  using Tr = detail::FieldTraits<T>;
  if (static_cast<int>(f.size()) != g.num_vertices)
    throw Error(ErrorKind::InvalidArgument, "field size does not match the vertex count");
  VertexField<T> out(g.num_vertices, Tr::zero());
  for (const WeightedEdge& e : g.edges) {
    if (e.i == e.j) continue;
    const T d = f[e.i] - f[e.j];
    out[e.i] += e.weight * d;
    out[e.j] -= e.weight * d;
  }
  return out;
}

template <class T>
VertexField<T> apply_laplace(const WeightedGraph& g, const VertexField<T>& f) {
  return apply_laplace<T>(g, std::span<const T>(f));
}

/// 1/2 sum_{edges} w_ij |f_i - f_j|^2; vector fields sum their components.
template <class T>
double dirichlet_energy(const WeightedGraph& g, std::span<const T> f) {
  using Tr = detail::FieldTraits<T>;
  if (static_cast<int>(f.size()) != g.num_vertices)
    throw Error(ErrorKind::InvalidArgument, "field size does not match the vertex count");
  double energy = 0;
  for (const WeightedEdge& e : g.edges) energy += e.weight * Tr::sqnorm(f[e.i] - f[e.j]);
  return 0.5 * energy;
}

template <class T>
double dirichlet_energy(const WeightedGraph& g, const VertexField<T>& f) {
  return dirichlet_energy<T>(g, std::span<const T>(f));
}

/// Sparse positive semi-definite matrix of the operator.
inline Eigen::SparseMatrix<double> laplacian_matrix(const WeightedGraph& g) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(4 * g.edges.size());
  for (const WeightedEdge& e : g.edges) {
    if (e.i == e.j) continue;
    trips.emplace_back(e.i, e.i, e.weight);
    trips.emplace_back(e.j, e.j, e.weight);
    trips.emplace_back(e.i, e.j, -e.weight);
    trips.emplace_back(e.j, e.i, -e.weight);
  }
  Eigen::SparseMatrix<double> L(g.num_vertices, g.num_vertices);
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

struct SolverOptions {
  /// Relative residual required of the linear solve.
  double tol = 1e-10;
  /// Systems with more unknowns than this use conjugate gradients.
  int direct_limit = 10000;
};

inline constexpr double kNeumannCompatibility = 1e-9;

namespace detail {

/// Labels connected components of the graph restricted to nonzero weights.
inline std::vector<int> weight_components(const WeightedGraph& g) {
  UnionFind uf(g.num_vertices);
  for (const WeightedEdge& e : g.edges)
    if (e.weight != 0) uf.unite(e.i, e.j);
  std::vector<int> label(g.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) label[v] = uf.find(v);
  return label;
}

/// Solves A x = b for SPD (or, from non-Delaunay weights, symmetric) A.
inline Eigen::MatrixXd solve_symmetric(const Eigen::SparseMatrix<double>& A, const Eigen::MatrixXd& b,
                                       const SolverOptions& opts) {
  Eigen::MatrixXd x(b.rows(), b.cols());
  if (A.rows() <= opts.direct_limit) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success)
      throw Error(ErrorKind::SolverFailure, "sparse LDLT factorization failed");
    x = ldlt.solve(b);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg(A);
    cg.setTolerance(opts.tol);
    cg.setMaxIterations(std::max<Eigen::Index>(1000, 10 * A.rows()));
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      x.col(c) = cg.solve(b.col(c));
      if (cg.info() != Eigen::Success)
        throw Error(ErrorKind::SolverFailure, "conjugate gradients did not converge");
    }
  }
  if (!x.allFinite()) throw Error(ErrorKind::SolverFailure, "linear solve produced non-finite values");
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    const double bn = b.col(c).norm();
    const double rn = (A * x.col(c) - b.col(c)).norm();
    if (rn > opts.tol * std::max(bn, 1e-300) && rn > 0)
      throw Error(ErrorKind::SolverFailure, "relative residual " + std::to_string(rn / bn) +
                                                " exceeds tolerance " + std::to_string(opts.tol));
  }
  return x;
}

template <class T>
void check_boundary_data(const WeightedGraph& g, const BoundaryData<T>& data) {
  for (const auto& [v, value] : data) {
    if (v < 0 || v >= g.num_vertices)
      throw Error(ErrorKind::InvalidArgument, "boundary vertex " + std::to_string(v) + " does not exist");
    if (!FieldTraits<T>::finite(value))
      throw Error(ErrorKind::InvalidArgument, "boundary value at vertex " + std::to_string(v) +
                                                  " is not finite");
  }
}

}  // namespace detail

/// Harmonic extension: f = g on the constrained vertices and L f = 0 elsewhere.
/// Constrained rows and columns are eliminated into the right-hand side. With
/// every vertex constrained, the boundary data is returned unchanged.
template <class T>
VertexField<T> solve_dirichlet(const WeightedGraph& g, const BoundaryData<T>& boundary,
                               const SolverOptions& opts = {}) {
  using Tr = detail::FieldTraits<T>;
  if (boundary.empty())
    throw Error(ErrorKind::InvalidArgument, "Dirichlet problem needs at least one constrained vertex");
  detail::check_boundary_data(g, boundary);

  const int n = g.num_vertices;
  VertexField<T> f(n, Tr::zero());
  std::vector<int> index(n, kNone);
  int unknowns = 0;
  for (int v = 0; v < n; ++v) {
    const auto it = boundary.find(v);
    if (it != boundary.end())
      f[v] = it->second;
    else
      index[v] = unknowns++;
  }
  if (unknowns == 0) return f;

  // Every free component must touch a constrained vertex.
  const auto comp = detail::weight_components(g);
  std::set<int> anchored;
  for (const auto& [v, value] : boundary) anchored.insert(comp[v]);
  for (int v = 0; v < n; ++v)
    if (index[v] != kNone && !anchored.count(comp[v]))
      throw Error(ErrorKind::SolverFailure,
                  "vertex " + std::to_string(v) + " is not connected to any constrained vertex");

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(unknowns, Tr::kCols);
  for (const WeightedEdge& e : g.edges) {
    if (e.i == e.j) continue;
    const int a = index[e.i], b = index[e.j];
    if (a != kNone) trips.emplace_back(a, a, e.weight);
    if (b != kNone) trips.emplace_back(b, b, e.weight);
    if (a != kNone && b != kNone) {
      trips.emplace_back(a, b, -e.weight);
      trips.emplace_back(b, a, -e.weight);
    } else if (a != kNone) {
      for (int c = 0; c < Tr::kCols; ++c) rhs(a, c) += e.weight * Tr::get(f[e.j], c);
    } else if (b != kNone) {
      for (int c = 0; c < Tr::kCols; ++c) rhs(b, c) += e.weight * Tr::get(f[e.i], c);
    }
  }
  Eigen::SparseMatrix<double> A(unknowns, unknowns);
  A.setFromTriplets(trips.begin(), trips.end());
  const Eigen::MatrixXd x = detail::solve_symmetric(A, rhs, opts);
  for (int v = 0; v < n; ++v)
    if (index[v] != kNone)
      for (int c = 0; c < Tr::kCols; ++c) Tr::set(f[v], c, x(index[v], c));
  return f;
}

/// Neumann problem: L f = g on the constrained vertices, L f = 0 elsewhere.
/// Requires |sum g| <= 1e-9 sum |g| on each connected component; the solution
/// is normalized to mean zero per component.
template <class T>
VertexField<T> solve_neumann(const WeightedGraph& g, const BoundaryData<T>& boundary,
                             const SolverOptions& opts = {}) {
  using Tr = detail::FieldTraits<T>;
  detail::check_boundary_data(g, boundary);
  const int n = g.num_vertices;
  const auto comp = detail::weight_components(g);

  for (int c = 0; c < Tr::kCols; ++c) {
    std::map<int, std::pair<double, double>> sums;  // component -> (sum, sum |.|)
    for (const auto& [v, value] : boundary) {
      auto& s = sums[comp[v]];
      s.first += Tr::get(value, c);
      s.second += std::abs(Tr::get(value, c));
    }
    for (const auto& [label, s] : sums)
      if (std::abs(s.first) > kNeumannCompatibility * s.second)
        throw Error(ErrorKind::IncompatibleData,
                    "Neumann data sums to " + std::to_string(s.first) + " on a connected component");
  }

  // Pin the lowest-index vertex of each component to zero.
  std::vector<int> index(n, kNone);
  std::set<int> pinned_components;
  int unknowns = 0;
  for (int v = 0; v < n; ++v) {
    if (pinned_components.insert(comp[v]).second) continue;
    index[v] = unknowns++;
  }

  VertexField<T> f(n, Tr::zero());
  if (unknowns > 0) {
    std::vector<Eigen::Triplet<double>> trips;
    for (const WeightedEdge& e : g.edges) {
      if (e.i == e.j) continue;
      const int a = index[e.i], b = index[e.j];
      if (a != kNone) trips.emplace_back(a, a, e.weight);
      if (b != kNone) trips.emplace_back(b, b, e.weight);
      if (a != kNone && b != kNone) {
        trips.emplace_back(a, b, -e.weight);
        trips.emplace_back(b, a, -e.weight);
      }
    }
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(unknowns, Tr::kCols);
    for (const auto& [v, value] : boundary)
      if (index[v] != kNone)
        for (int c = 0; c < Tr::kCols; ++c) rhs(index[v], c) = Tr::get(value, c);
    Eigen::SparseMatrix<double> A(unknowns, unknowns);
    A.setFromTriplets(trips.begin(), trips.end());
    const Eigen::MatrixXd x = detail::solve_symmetric(A, rhs, opts);
    for (int v = 0; v < n; ++v)
      if (index[v] != kNone)
        for (int c = 0; c < Tr::kCols; ++c) Tr::set(f[v], c, x(index[v], c));
  }

  std::map<int, std::pair<T, int>> mean;
  for (int v = 0; v < n; ++v) {
    auto [it, inserted] = mean.try_emplace(comp[v], Tr::zero(), 0);
    it->second.first += f[v];
    ++it->second.second;
  }
  for (int v = 0; v < n; ++v) {
    const auto& m = mean.at(comp[v]);
    f[v] -= m.first / static_cast<double>(m.second);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Convex hull property

struct HullViolation {
  int vertex = kNone;
  /// Distance from the value to the convex hull of the neighbor values.
  double distance = 0;
};

namespace detail {

/// Lawson-Hanson non-negative least squares: min |A x - b| subject to x >= 0.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter = 500) {
  const Eigen::Index n = A.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<char> passive(n, 0);
  const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()) * std::max(1.0, b.norm());

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[j]) cols.push_back(j);
    Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(cols[k]);
    const Eigen::VectorXd zp = Ap.completeOrthogonalDecomposition().solve(b);
    z.setZero(n);
    for (std::size_t k = 0; k < cols.size(); ++k) z[cols[k]] = zp[static_cast<Eigen::Index>(k)];
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    if (best < 0) break;
    passive[best] = 1;
    for (int inner = 0; inner < max_iter; ++inner) {
      Eigen::VectorXd z;
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && x[j] <= 1e-15) {
          passive[j] = 0;
          x[j] = 0;
        }
    }
  }
  return x;
}

/// Distance from `p` to the convex hull of `pts` (approximate outside the hull,
/// exact zero test inside).
template <class T>
double distance_to_hull(const T& p, const std::vector<T>& pts) {
  using Tr = FieldTraits<T>;
  const Eigen::Index m = static_cast<Eigen::Index>(pts.size());
  double scale = 0;
  for (const T& q : pts) scale = std::max(scale, std::sqrt(Tr::sqnorm(q - p)));
  if (scale == 0) return 0;
  Eigen::MatrixXd A(Tr::kCols + 1, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(Tr::kCols + 1);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (int c = 0; c < Tr::kCols; ++c) A(c, j) = (Tr::get(pts[j], c) - Tr::get(p, c)) / scale;
    A(Tr::kCols, j) = 1.0;
  }
  b[Tr::kCols] = 1.0;
  const Eigen::VectorXd lambda = nnls(A, b);
  const double total = lambda.sum();
  if (!(total > 0)) return scale;
  const Eigen::VectorXd mix = A.topRows(Tr::kCols) * (lambda / total);
  return mix.norm() * scale;
}

}  // namespace detail

/// Reports every listed vertex whose value lies outside the convex hull of its
/// neighbors' values (neighbors along any edge of the weighted graph).
template <class T>
std::vector<HullViolation> check_harmonic_hull(const WeightedGraph& g, const VertexField<T>& f,
                                               std::span<const int> vertices, double tol = 1e-9) {
  using Tr = detail::FieldTraits<T>;
  std::vector<std::vector<std::pair<int, double>>> nbrs(g.num_vertices);
  for (const WeightedEdge& e : g.edges) {
    if (e.i == e.j) continue;
    nbrs[e.i].push_back({e.j, e.weight});
    nbrs[e.j].push_back({e.i, e.weight});
  }

  std::vector<HullViolation> out;
  for (int v : vertices) {
    if (nbrs[v].empty()) continue;
    double scale = std::sqrt(Tr::sqnorm(f[v]));
    for (const auto& [u, w] : nbrs[v]) scale = std::max(scale, std::sqrt(Tr::sqnorm(f[u])));
    const double slack = tol * std::max(scale, 1e-300);

    if constexpr (std::is_same_v<T, double>) {
      double lo = f[nbrs[v].front().first], hi = lo;
      for (const auto& [u, w] : nbrs[v]) {
        lo = std::min(lo, f[u]);
        hi = std::max(hi, f[u]);
      }
      const double d = std::max({0.0, lo - f[v], f[v] - hi});
      if (d > slack) out.push_back({v, d});
    } else {
      // Harmonic values are the weight-barycentric combination of neighbors.
      double wsum = 0;
      bool nonneg = true;
      T mean = Tr::zero();
      for (const auto& [u, w] : nbrs[v]) {
        wsum += w;
        nonneg = nonneg && w >= 0;
        mean += w * f[u];
      }
      if (nonneg && wsum > 0 && std::sqrt(Tr::sqnorm(f[v] - mean / wsum)) <= slack) continue;
      std::vector<T> pts;
      for (const auto& [u, w] : nbrs[v]) pts.push_back(f[u]);
      const double d = detail::distance_to_hull(f[v], pts);
      if (d > slack) out.push_back({v, d});
    }
  }
  return out;
}

/// Vertices not on the surface boundary.
inline std::vector<int> interior_vertices(const PiecewiseFlatSurface& s) {
  std::vector<int> out;
  for (int v = 0; v < s.num_vertices(); ++v)
    if (!s.is_boundary_vertex(v)) out.push_back(v);
  return out;
}

}  // namespace idtlab
