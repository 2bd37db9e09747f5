#pragma once

#include "npt/error.hpp"
#include "npt/jets.hpp"
#include "npt/random.hpp"
#include "npt/format.hpp"
#include "npt/fiber.hpp"
#include "npt/monotonicity.hpp"
#include "npt/catalog.hpp"
#include "npt/fiberegularity.hpp"
#include "npt/duality.hpp"
#include "npt/garding.hpp"
#include "npt/grid.hpp"
#include "npt/canonical.hpp"
#include "npt/boundary.hpp"
#include "npt/expression.hpp"
#include "npt/solver.hpp"
#include "npt/keys.hpp"
#include "npt/io.hpp"
