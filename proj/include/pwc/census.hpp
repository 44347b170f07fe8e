#pragma once

#include "pwc/map.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace pwc {

enum class OrbitKind { regular, degenerate };
enum class Externality { internal, external };
enum class Side { left, right, both };

const char* side_name(Side s);

/// Outcome of the germ-side regularity test: either a surviving seed side or
/// the step at which every seed is blocked.
struct Classification {
  OrbitKind kind = OrbitKind::regular;
  bool shortcut = false;  // no discontinuity on the orbit (regular for free)
  std::optional<Side> witness_seed;
  std::optional<std::size_t> blocking_step;
};

struct PeriodicOrbitRecord {
  std::vector<Rational> points;  // iteration order, least point first
  std::size_t period = 0;
  ItineraryWord word;  // length = period, itinerary of the least point
  OrbitKind kind = OrbitKind::regular;
  Externality externality = Externality::internal;
  Classification classification;

  const Rational& least_point() const { return points.front(); }
};

struct TrappingInterval {
  Rational owner;  // the periodic point p
  SidedInterval interval;
  std::size_t period = 0;
  bool used_merged_cell = false;  // an iterate straddles an exactly-abutting jump
};

struct TrappingRegion {
  PeriodicOrbitRecord orbit;
  std::vector<TrappingInterval> components;  // one per orbit point, in orbit order

  IntervalList intervals() const;
};

struct ConvergenceEvidence {
  std::size_t seeds = 0;
  std::size_t converged = 0;

  bool complete() const { return seeds > 0 && converged == seeds; }
};

struct CensusVerdict {
  std::size_t regular_count = 0;     // m
  std::size_t degenerate_count = 0;  // d
  std::size_t piece_count = 0;       // n
  bool bound_ok = false;             // m + d <= n
  bool tight = false;                // m + d == n
  std::optional<ConvergenceEvidence> evidence;  // sampled, only when tight
  std::vector<PeriodicOrbitRecord> orbits;
};

struct CensusOptions {
  std::size_t max_period = 24;
  std::size_t grid_seeds = 256;
  std::size_t grid_max_steps = 2000;
  Rational grid_tolerance = Rational(1, 1000000000000LL);  // 1e-12
  std::size_t bit_budget = 0;                              // 0 = unlimited
};

/// Exactly the periodic orbits of period <= max_period, found as fixed points
/// of composed cylinder maps, deduplicated and keyed by (period, least point).
std::vector<PeriodicOrbitRecord> enumerate_periodic_orbits(const PiecewiseAffineContraction& map,
                                                           std::size_t max_period,
                                                           std::size_t bit_budget = 0);

/// Regular/degenerate with a side certificate.  Orbits avoiding 0 and every
/// discontinuity are regular outright; otherwise germ sides are propagated
/// over two periods (slope signs flip the side) and checked against the
/// owning side at each external point.
Classification classify(const PiecewiseAffineContraction& map,
                        const PeriodicOrbitRecord& orbit);

/// The maximal trapping interval of a regular periodic point: exact solution
/// of the per-step cell constraints plus f^period(J) subset J, then exact
/// per-endpoint open/closed adjustment.  Throws DegenerateOwner for
/// degenerate owners.
TrappingInterval maximal_trapping_interval(const PiecewiseAffineContraction& map,
                                           const Rational& p, std::size_t period);

TrappingRegion trapping_region(const PiecewiseAffineContraction& map,
                               const PeriodicOrbitRecord& orbit);

CensusVerdict census_verdict(const PiecewiseAffineContraction& map, const CensusOptions& options);

struct AppendixACensusEntry {
  PeriodicOrbitRecord orbit;
  Rational epsilon;       // right end of J_p = [p, epsilon)
  SidedInterval basin;    // J_p itself
  Rational alpha;         // the assigned breakpoint (1 stands for x_n)
};

/// The piecewise increasing, left-closed fast path; requires every domain of
/// the form [x_{i-1}, x_i) with positive slope.
std::vector<AppendixACensusEntry> appendix_a_census(const PiecewiseAffineContraction& map,
                                                    std::size_t max_period = 24);

}  // namespace pwc
