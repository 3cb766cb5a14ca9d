// Flips the kite to its intrinsic Delaunay triangulation and prints the
// cotan weight of the diagonal before and after.
#include "idtlab/idtlab.hpp"

#include <cstdio>

int main() {
  using namespace idtlab;
  PiecewiseFlatSurface s = PiecewiseFlatSurface::from_embedding(shapes::kite());
  const int diagonal = 2;  // first interior edge, A-C
  const auto [a, c] = s.endpoints(diagonal);
  std::printf("diagonal %d-%d: length %.12f weight %+.12f hrm %.12f\n", a, c, s.length(diagonal),
              edge_weight(s, diagonal), harmonic_index(s));

  const FlipLog log = flip_to_delaunay(s);
  for (const FlipRecord& r : log)
    std::printf("flip #%d: edge %d %d-%d -> %d-%d, length %.12f -> %.12f\n", r.ordinal, r.edge,
                r.old_endpoints[0], r.old_endpoints[1], r.new_endpoints[0], r.new_endpoints[1], r.old_length,
                r.new_length);

  const auto [b, d] = s.endpoints(diagonal);
  std::printf("diagonal %d-%d: length %.12f weight %+.12f hrm %.12f\n", b, d, s.length(diagonal),
              edge_weight(s, diagonal), harmonic_index(s));
}
