#pragma once

#include "pwc/gapflow.hpp"
#include "pwc/map.hpp"

#include <string>

namespace pwc {

/// Deterministic SVG renderings: identical inputs yield byte-identical
/// output (coordinates are derived from exact rationals, never from floats).

/// Graph of the map with side-flag endpoint markers (filled = owned).
std::string svg_graph(const PiecewiseAffineContraction& map);

/// Orbit staircase from x0 over the diagonal.
std::string svg_cobweb(const PiecewiseAffineContraction& map, const Rational& x0,
                       std::size_t steps);

/// Interval coloring of the stable-manifold decomposition; residual hatched.
std::string svg_basins(const Decomposition& dec);

/// Gap-layer tiling: one row per propagation level, colored by gap index.
std::string svg_gaps(const GapAtlas& atlas);

}  // namespace pwc
