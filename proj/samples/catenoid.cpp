// Relaxes a cylinder spanned between two rings toward a discrete minimal
// surface and writes the result as OFF.
#include "idtlab/idtlab.hpp"

#include <cstdio>
#include <string>

int main(int argc, char** argv) {
  using namespace idtlab;
  const EmbeddedMesh start = shapes::ring_cylinder(12, 19);
  const MinimalResult result = minimal_solve(start, boundary_constraints(start));
  for (const MinimalIteration& it : result.log)
    std::printf("iter %3d  energy %.12f  area %.9f  max_disp %.3e  flips %d\n", it.iter, it.energy, it.area,
                it.max_disp, it.flips);
  std::printf("%s after %zu iterations, residual %.3e\n", result.converged ? "converged" : "not converged",
              result.log.size(), result.residual);
  if (argc > 1) io::save_off(argv[1], result.mesh);
  return result.converged ? 0 : 1;
}
