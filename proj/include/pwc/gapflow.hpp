#pragma once

#include "pwc/census.hpp"
#include "pwc/chains.hpp"
#include "pwc/map.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace pwc {

/// One propagated copy of a gap interval, with the affine relation taking the
/// original gap onto it.
struct Layer {
  SidedInterval interval;
  Rational slope;
  Rational intercept;
};

/// The gap structure of the map: the open set missed by the image (E), the
/// finitely many points of E that eventually land on a discontinuity (B), the
/// open gap intervals F_1..F_r = components of E \ B, and their forward
/// layers up to a chosen depth.
struct GapAtlas {
  IntervalList E;
  std::vector<Rational> B;
  IntervalList F;
  std::vector<std::vector<Layer>> layers;  // layers[j][l] = l-th image of F[j]
  std::size_t depth = 0;

  Rational layer_coverage() const;  // total length of all layers
};

/// First time a gap interval's layer is absorbed by a trapping region;
/// nullopt = not absorbed within the propagation depth.
struct CaptureRecord {
  std::size_t gap_index = 0;
  std::size_t orbit_index = 0;
  std::optional<std::size_t> target_time;
};

/// Depth-limited interior of the basin of attraction of one regular orbit:
/// the interior of its trapping region plus every pre-capture gap layer.
struct StableManifoldRecord {
  PeriodicOrbitRecord orbit;
  IntervalList open_intervals;
  Rational uncovered_bound = 0;  // kappa^(depth+1)

  Rational inf_point() const;
};

struct BetaAssignment {
  std::size_t source = 0;  // index into manifolds; manifolds.size() = residual
  Rational inf_point;
  std::size_t first_hit_index = 0;  // q: steps until the orbit of inf hits a breakpoint
  Rational breakpoint;
};

struct Decomposition {
  std::vector<StableManifoldRecord> manifolds;
  IntervalList residual;  // open components not covered by any closure(W_j)
  std::vector<bool> residual_below_resolution;  // per residual component
  std::vector<BetaAssignment> beta;

  bool residual_nonempty() const { return !residual.empty(); }
};

/// Interior of [0,1) minus the image of the map: at most n+1 open intervals
/// of total length >= 1 - kappa.
IntervalList compute_E(const PiecewiseAffineContraction& map);

/// Points of E whose forward orbit hits a discontinuity, found by following
/// each breakpoint's backward preimage chain (a point of E has no preimage,
/// so every chain contributes at most its final point).
std::vector<Rational> compute_B(const PiecewiseAffineContraction& map, const IntervalList& E,
                                std::size_t bit_budget = 0);

/// E, B and the gap intervals F (layers left empty).
GapAtlas compute_F(const PiecewiseAffineContraction& map, std::size_t bit_budget = 0);

/// Fills layers f^l(F_j) for l = 0..L.  Verifies that every layer is a single
/// open interval avoiding all breakpoints (throws LayerHitBreakpoint
/// otherwise), that all layers are pairwise disjoint, and that the uncovered
/// length is at most kappa^(L+1).
GapAtlas propagate(const PiecewiseAffineContraction& map, GapAtlas atlas, std::size_t depth,
                   std::size_t bit_budget = 0);

/// Target times for every (gap, region) pair; each layer must be contained in
/// or disjoint from each region (exact dichotomy), and every region must
/// capture at least one gap.
std::vector<CaptureRecord> target_times(const PiecewiseAffineContraction& map,
                                        const GapAtlas& atlas,
                                        const std::vector<TrappingRegion>& regions);

StableManifoldRecord stable_manifold_interior(const PiecewiseAffineContraction& map,
                                              const GapAtlas& atlas, const TrappingRegion& region,
                                              const std::vector<CaptureRecord>& captures,
                                              std::size_t orbit_index);

/// Splits [0,1) into the manifold interiors, the residual, and the injective
/// breakpoint assignment beta.  Each degenerate orbit's points are verified
/// to lie on manifold boundaries.
Decomposition decompose_and_beta(const PiecewiseAffineContraction& map,
                                 std::vector<StableManifoldRecord> manifolds,
                                 const std::vector<PeriodicOrbitRecord>& degenerate_orbits = {},
                                 std::size_t hit_budget = 4096);

/// The pair sequence read off a degenerate orbit: for each orbit point on a
/// discontinuity (taken in iterate order from the least point), the pair of
/// basin indices whose closures flank it, the owning side first.  Basins are
/// numbered 1..m in manifold order, with the residual as m+1.
struct HarvestedChain {
  Chain chain;
  std::vector<std::size_t> hit_iterates;  // which iterates sit on a discontinuity
  bool contains_zero = false;
  std::size_t coordinate_count = 0;
};

/// Builds the pair sequence for a degenerate orbit and verifies it is a chain
/// whose coordinate count is at most s (s - 1 when the orbit contains 0).
HarvestedChain harvest_chain(const PiecewiseAffineContraction& map, const Decomposition& dec,
                             const PeriodicOrbitRecord& orbit);

}  // namespace pwc
