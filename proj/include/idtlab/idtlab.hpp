#pragma once

// Intrinsic Delaunay triangulations and the discrete Laplace-Beltrami operator
// of piecewise flat surfaces.

#include "idtlab/curvature.hpp"
#include "idtlab/errors.hpp"
#include "idtlab/geometry.hpp"
#include "idtlab/idt.hpp"
#include "idtlab/io.hpp"
#include "idtlab/laplace.hpp"
#include "idtlab/mesh.hpp"
#include "idtlab/oracle.hpp"
#include "idtlab/shapes.hpp"
#include "idtlab/surface.hpp"
#include "idtlab/verify.hpp"
