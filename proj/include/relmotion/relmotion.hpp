#pragma once

// relmotion: exact transforms between interacting-particle Langevin systems
// and their normalized relative motions, with correlated-noise construction,
// Euler simulation of both classes, and pathwise verification.

#include "relmotion/consistency.hpp"
#include "relmotion/correspondence.hpp"
#include "relmotion/csv.hpp"
#include "relmotion/errors.hpp"
#include "relmotion/matrix.hpp"
#include "relmotion/noise.hpp"
#include "relmotion/pair_index.hpp"
#include "relmotion/rng.hpp"
#include "relmotion/sde.hpp"
#include "relmotion/state.hpp"
#include "relmotion/transform.hpp"
