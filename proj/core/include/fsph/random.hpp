#pragma once

#include <random>

#include "fsph/state.hpp"

namespace fsph {

// Haar-uniform random ray: amplitudes (g1 + i·g2)/√2 with g1, g2 standard
// normal, then normalized. Deterministic for a given engine state.
StateVector random_state(std::size_t dim, std::mt19937_64& rng);

}  // namespace fsph
