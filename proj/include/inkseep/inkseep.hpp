#pragma once

// Mesoscopic finite-volume ink seepage simulator: voxelized fiber
// structures, a lattice interaction energy with a volume penalty, an exact
// min-cut solver for the infinite-volume case, and a quasi-linear genetic
// solver with a reservoir boundary for the finite-volume case.

#include "inkseep/analysis.hpp"
#include "inkseep/config.hpp"
#include "inkseep/energy.hpp"
#include "inkseep/fiber.hpp"
#include "inkseep/gasolver.hpp"
#include "inkseep/grid.hpp"
#include "inkseep/io.hpp"
#include "inkseep/mincut.hpp"
#include "inkseep/pipeline.hpp"
#include "inkseep/random.hpp"
