#include "pwc/gapflow.hpp"

#include <algorithm>
#include <set>

namespace pwc {

namespace {
const SidedInterval kUnit = SidedInterval::half_open(0, 1);
}

Rational GapAtlas::layer_coverage() const {
  Rational sum = 0;
  for (const auto& per_gap : layers)
    for (const auto& layer : per_gap) sum += layer.interval.length();
  return sum;
}

Rational StableManifoldRecord::inf_point() const {
  if (open_intervals.empty())
    throw PwcError(Errc::precondition_failed, "empty stable manifold");
  return open_intervals.front().lo;
}

IntervalList compute_E(const PiecewiseAffineContraction& map) {
  return list_interior(list_complement(kUnit, map.range()));
}

std::vector<Rational> compute_B(const PiecewiseAffineContraction& map, const IntervalList& E,
                                std::size_t bit_budget) {
  std::vector<Rational> B;
  for (const Rational& x : map.interior_breakpoints()) {
    std::set<Rational> chain;
    Rational y = x;
    while (true) {
      if (bit_budget != 0 && bit_size(y) > bit_budget)
        throw PwcError(Errc::arithmetic_budget_exceeded, "backward chain exceeds bit budget");
      if (!chain.insert(y).second) break;  // exact cycle: never meets E again
      if (list_contains(E, y)) {
        B.push_back(y);
        break;  // a point of E has no preimage
      }
      auto pre = map.preimage_point(y);
      if (!pre) break;
      y = *pre;
    }
  }
  std::sort(B.begin(), B.end());
  B.erase(std::unique(B.begin(), B.end()), B.end());
  if (B.size() > map.piece_count() - 1)
    throw PwcError(Errc::precondition_failed, "exceptional set larger than n-1");
  return B;
}

GapAtlas compute_F(const PiecewiseAffineContraction& map, std::size_t bit_budget) {
  GapAtlas atlas;
  atlas.E = compute_E(map);
  atlas.B = compute_B(map, atlas.E, bit_budget);
  for (const auto& comp : atlas.E) {
    std::vector<Rational> cuts;
    for (const auto& b : atlas.B)
      if (comp.contains(b)) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    Rational lo = comp.lo;
    for (const auto& c : cuts) {
      atlas.F.push_back(SidedInterval::open(lo, c));
      lo = c;
    }
    atlas.F.push_back(SidedInterval::open(lo, comp.hi));
  }
  if (atlas.F.size() > 2 * map.piece_count())
    throw PwcError(Errc::precondition_failed, "more than 2n gap intervals");
  return atlas;
}

GapAtlas propagate(const PiecewiseAffineContraction& map, GapAtlas atlas, std::size_t depth,
                   std::size_t bit_budget) {
  const auto breakpoints = map.breakpoints();
  auto check_clear = [&](const SidedInterval& layer) {
    for (const auto& b : breakpoints)
      if (layer.contains(b))
        throw PwcError(Errc::layer_hit_breakpoint,
                       "layer " + layer.str() + " contains breakpoint " + to_fraction_string(b));
  };
  atlas.depth = depth;
  atlas.layers.assign(atlas.F.size(), {});
  for (std::size_t j = 0; j < atlas.F.size(); ++j) {
    Layer cur{atlas.F[j], 1, 0};
    check_clear(cur.interval);
    atlas.layers[j].push_back(cur);
    for (std::size_t l = 1; l <= depth; ++l) {
      Rational mid = (cur.interval.lo + cur.interval.hi) / 2;
      const auto& pc = map.pieces()[map.piece_index(mid) - 1];
      cur = {cur.interval.affine_image(pc.slope, pc.intercept), pc.slope * cur.slope,
             pc.slope * cur.intercept + pc.intercept};
      if (bit_budget != 0 &&
          bit_size(cur.interval.lo) + bit_size(cur.interval.hi) > 2 * bit_budget)
        throw PwcError(Errc::arithmetic_budget_exceeded, "layer endpoints exceed bit budget");
      check_clear(cur.interval);
      atlas.layers[j].push_back(cur);
    }
  }
  // the layers tile [0,1) up to a leftover of at most kappa^(depth+1)
  std::vector<const SidedInterval*> all;
  for (const auto& per_gap : atlas.layers)
    for (const auto& layer : per_gap) all.push_back(&layer.interval);
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b)
      if (!all[a]->disjoint_from(*all[b]))
        throw PwcError(Errc::precondition_failed,
                       "layers " + all[a]->str() + " and " + all[b]->str() + " overlap");
  Rational leftover = 1 - atlas.layer_coverage();
  if (leftover > rational_pow(map.kappa(), static_cast<unsigned long>(depth) + 1))
    throw PwcError(Errc::precondition_failed, "layer coverage below the certified bound");
  return atlas;
}

std::vector<CaptureRecord> target_times(const PiecewiseAffineContraction& map,
                                        const GapAtlas& atlas,
                                        const std::vector<TrappingRegion>& regions) {
  (void)map;
  std::vector<CaptureRecord> records;
  for (std::size_t ri = 0; ri < regions.size(); ++ri) {
    const IntervalList omega = regions[ri].intervals();
    bool captured_any = false;
    for (std::size_t j = 0; j < atlas.layers.size(); ++j) {
      CaptureRecord rec{j, ri, std::nullopt};
      for (std::size_t l = 0; l < atlas.layers[j].size(); ++l) {
        const SidedInterval& layer = atlas.layers[j][l].interval;
        if (subset_of_list(layer, omega)) {
          rec.target_time = l;
          break;
        }
        if (!lists_disjoint({layer}, omega))
          throw PwcError(Errc::precondition_failed,
                         "layer " + layer.str() + " partially overlaps a trapping region");
      }
      captured_any = captured_any || rec.target_time.has_value();
      records.push_back(std::move(rec));
    }
    if (!captured_any)
      throw PwcError(Errc::precondition_failed,
                     "a trapping region captures no gap interval at this depth");
  }
  return records;
}

StableManifoldRecord stable_manifold_interior(const PiecewiseAffineContraction& map,
                                              const GapAtlas& atlas, const TrappingRegion& region,
                                              const std::vector<CaptureRecord>& captures,
                                              std::size_t orbit_index) {
  StableManifoldRecord rec;
  rec.orbit = region.orbit;
  rec.uncovered_bound = rational_pow(map.kappa(), static_cast<unsigned long>(atlas.depth) + 1);
  IntervalList parts = list_interior(region.intervals());
  for (const auto& cap : captures) {
    if (cap.orbit_index != orbit_index || !cap.target_time) continue;
    for (std::size_t l = 0; l < *cap.target_time; ++l)
      parts.push_back(atlas.layers[cap.gap_index][l].interval);
  }
  rec.open_intervals = normalize_union(std::move(parts));
  return rec;
}

Decomposition decompose_and_beta(const PiecewiseAffineContraction& map,
                                 std::vector<StableManifoldRecord> manifolds,
                                 const std::vector<PeriodicOrbitRecord>& degenerate_orbits,
                                 std::size_t hit_budget) {
  Decomposition dec;
  dec.manifolds = std::move(manifolds);

  IntervalList closures;
  Rational resolution = 0;
  for (const auto& m : dec.manifolds) {
    resolution = std::max(resolution, m.uncovered_bound);
    for (const auto& comp : m.open_intervals) closures.push_back(comp.closure());
  }
  dec.residual = list_interior(list_complement(kUnit, std::move(closures)));
  for (const auto& comp : dec.residual)
    dec.residual_below_resolution.push_back(comp.length() < resolution);

  const auto breakpoints = map.breakpoints();
  auto is_breakpoint = [&](const Rational& z) {
    return std::find(breakpoints.begin(), breakpoints.end() - 1, z) != breakpoints.end() - 1;
  };
  auto assign = [&](std::size_t source, const Rational& inf) {
    BetaAssignment a;
    a.source = source;
    a.inf_point = inf;
    Rational z = inf;
    std::size_t q = 0;
    while (!is_breakpoint(z)) {
      if (++q > hit_budget)
        throw PwcError(Errc::beta_hit_not_found,
                       "orbit of " + to_fraction_string(inf) + " hits no breakpoint");
      z = map.evaluate(z);
    }
    a.first_hit_index = q;
    a.breakpoint = z;
    return a;
  };
  for (std::size_t i = 0; i < dec.manifolds.size(); ++i)
    dec.beta.push_back(assign(i, dec.manifolds[i].inf_point()));
  if (!dec.residual.empty())
    dec.beta.push_back(assign(dec.manifolds.size(), dec.residual.front().lo));

  std::set<Rational> values;
  for (const auto& a : dec.beta)
    if (!values.insert(a.breakpoint).second)
      throw PwcError(Errc::precondition_failed,
                     "breakpoint assignment collides at " + to_fraction_string(a.breakpoint));

  // every degenerate orbit point must sit on a manifold/residual boundary
  std::set<Rational> boundary;
  for (const auto& m : dec.manifolds)
    for (const auto& comp : m.open_intervals) {
      boundary.insert(comp.lo);
      boundary.insert(comp.hi);
    }
  for (const auto& comp : dec.residual) {
    boundary.insert(comp.lo);
    boundary.insert(comp.hi);
  }
  for (const auto& orbit : degenerate_orbits)
    for (const auto& pt : orbit.points)
      if (!boundary.count(pt))
        throw PwcError(Errc::precondition_failed,
                       "degenerate point " + to_fraction_string(pt) +
                           " is not on a basin boundary");
  return dec;
}

HarvestedChain harvest_chain(const PiecewiseAffineContraction& map, const Decomposition& dec,
                             const PeriodicOrbitRecord& orbit) {
  if (orbit.kind != OrbitKind::degenerate)
    throw PwcError(Errc::precondition_failed, "chain harvesting applies to degenerate orbits");

  // basins 1..m are the manifolds; the residual, when present, is basin m+1
  std::vector<IntervalList> basins;
  for (const auto& m : dec.manifolds) {
    IntervalList closures;
    for (const auto& comp : m.open_intervals) closures.push_back(comp.closure());
    basins.push_back(std::move(closures));
  }
  if (!dec.residual.empty()) {
    IntervalList closures;
    for (const auto& comp : dec.residual) closures.push_back(comp.closure());
    basins.push_back(std::move(closures));
  }

  // basin whose closure contains a one-sided neighborhood of p
  auto side_basin = [&](const Rational& p, bool right) {
    std::set<std::size_t> found;
    for (std::size_t i = 0; i < basins.size(); ++i)
      for (const auto& c : basins[i])
        if (right ? (c.lo <= p && p < c.hi) : (c.lo < p && p <= c.hi)) found.insert(i);
    if (found.size() != 1)
      throw PwcError(Errc::precondition_failed,
                     "no unique basin closure beside " + to_fraction_string(p));
    return static_cast<int>(*found.begin()) + 1;
  };

  const auto interior = map.interior_breakpoints();
  auto on_discontinuity = [&](const Rational& p) {
    return p == 0 || std::find(interior.begin(), interior.end(), p) != interior.end();
  };

  HarvestedChain out;
  for (std::size_t l = 0; l < orbit.points.size(); ++l) {
    const Rational& p = orbit.points[l];
    if (p == 0) out.contains_zero = true;
    if (!on_discontinuity(p)) continue;
    const auto& owner = map.pieces()[map.piece_index(p) - 1].domain;
    bool owning_right = p == owner.lo;  // otherwise the piece ends at p from the left
    int a = side_basin(p, owning_right);
    int b = p == 0 ? a : side_basin(p, !owning_right);
    out.chain.pairs.push_back({a, b});
    out.hit_iterates.push_back(l);
  }
  if (!is_chain(out.chain.pairs))
    throw PwcError(Errc::precondition_failed, "harvested pairs violate the chain condition");
  out.coordinate_count = coordinate_set(out.chain).size();
  std::size_t bound = out.chain.s() - (out.contains_zero ? 1 : 0);
  if (out.coordinate_count > bound)
    throw PwcError(Errc::precondition_failed, "harvested chain exceeds its coordinate bound");
  return out;
}

}  // namespace pwc
