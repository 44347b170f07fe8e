#pragma once

#include "pwc/map.hpp"

#include <cstdint>

namespace pwc {

/// Deterministic-from-seed random validated map with n pieces: breakpoints on
/// a 1/64 grid, slopes +-k/64 with 8 <= k <= 56, images packed injectively
/// into [0,1) with strictly positive gaps, randomized breakpoint ownership.
/// Throws GenerationFailed if no candidate validates within the retry bound.
PiecewiseAffineContraction fuzz_generate(std::size_t n, std::uint64_t seed);

/// Same generator restricted to the piecewise increasing, left-closed class:
/// every slope positive and every piece of the form [x_i, x_{i+1}).
PiecewiseAffineContraction fuzz_generate_increasing(std::size_t n, std::uint64_t seed);

}  // namespace pwc
