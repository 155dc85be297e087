#pragma once

// Exact computation of centers and parabolic covering kernels of unitary
// Kac-Moody groups, through integer lattices in coroot coordinates.

#include "kmlat/cartan.hpp"
#include "kmlat/center.hpp"
#include "kmlat/errors.hpp"
#include "kmlat/exact.hpp"
#include "kmlat/lattice.hpp"
#include "kmlat/matrix.hpp"
#include "kmlat/parabolic.hpp"
#include "kmlat/version.hpp"
