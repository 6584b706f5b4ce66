#pragma once

// Umbrella header for the subharmonic toolkit.

#include "subh/action.hpp"
#include "subh/errors.hpp"
#include "subh/galerkin.hpp"
#include "subh/iteration.hpp"
#include "subh/linear_flow.hpp"
#include "subh/loop.hpp"
#include "subh/maslov.hpp"
#include "subh/model.hpp"
#include "subh/serialize.hpp"
#include "subh/solver.hpp"
#include "subh/symplectic.hpp"
