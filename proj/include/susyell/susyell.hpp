#pragma once

/// Umbrella header: the whole library in one include.

#include "catalog.hpp"
#include "constants.hpp"
#include "eigensolver.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "perturbation.hpp"
#include "potential.hpp"
#include "quadrature.hpp"
#include "radial_function.hpp"
#include "riccati.hpp"
#include "superpotential.hpp"
#include "verify.hpp"
