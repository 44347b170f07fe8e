#include "pwc/census.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace pwc {

const char* side_name(Side s) {
  switch (s) {
    case Side::left: return "left";
    case Side::right: return "right";
    case Side::both: return "both";
  }
  return "?";
}

IntervalList TrappingRegion::intervals() const {
  IntervalList out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.interval);
  std::sort(out.begin(), out.end(),
            [](const SidedInterval& a, const SidedInterval& b) { return a.lo < b.lo; });
  return out;
}

namespace {

bool is_external_point(const PiecewiseAffineContraction& map, const Rational& x) {
  if (x == 0) return true;
  for (const Rational& b : map.interior_breakpoints())
    if (x == b) return true;
  return false;
}

// The side of an external point covered by its owning piece.
Side owning_side(const PiecewiseAffineContraction& map, const Rational& x) {
  const auto& d = map.pieces()[map.piece_index(x) - 1].domain;
  return x == d.lo ? Side::right : Side::left;
}

Side flip(Side s) {
  if (s == Side::left) return Side::right;
  if (s == Side::right) return Side::left;
  return Side::both;
}

Classification classify_points(const PiecewiseAffineContraction& map,
                               const std::vector<Rational>& points) {
  Classification result;
  bool any_external = false;
  for (const auto& p : points) any_external = any_external || is_external_point(map, p);
  if (!any_external) {
    result.shortcut = true;  // the orbit never meets a discontinuity
    return result;
  }
  // A one-sided germ at the least point survives iff its propagated side (the
  // sign of the local slope flips it) matches the owning side at every
  // external point.  Two periods close the side cycle, so checking 2k steps
  // decides survival forever.
  const std::size_t k = points.size();
  std::size_t deepest = 0;
  for (Side seed : {Side::left, Side::right}) {
    Side side = seed;
    bool blocked = false;
    for (std::size_t step = 0; step < 2 * k; ++step) {
      const Rational& x = points[step % k];
      if (is_external_point(map, x) && side != owning_side(map, x)) {
        blocked = true;
        deepest = std::max(deepest, step);
        break;
      }
      if (map.pieces()[map.piece_index(x) - 1].slope < 0) side = flip(side);
    }
    if (!blocked) {
      result.witness_seed = seed;
      return result;
    }
  }
  result.kind = OrbitKind::degenerate;
  result.blocking_step = deepest;
  return result;
}

PeriodicOrbitRecord make_record(const PiecewiseAffineContraction& map,
                                std::vector<Rational> cycle) {
  auto least = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), least, cycle.end());
  PeriodicOrbitRecord rec;
  rec.period = cycle.size();
  rec.word = map.itinerary(cycle.front(), cycle.size());
  rec.points = std::move(cycle);
  bool external = false;
  for (const auto& p : rec.points) external = external || is_external_point(map, p);
  rec.externality = external ? Externality::external : Externality::internal;
  rec.classification = classify_points(map, rec.points);
  rec.kind = rec.classification.kind;
  return rec;
}

}  // namespace

Classification classify(const PiecewiseAffineContraction& map, const PeriodicOrbitRecord& orbit) {
  return classify_points(map, orbit.points);
}

std::vector<PeriodicOrbitRecord> enumerate_periodic_orbits(const PiecewiseAffineContraction& map,
                                                           std::size_t max_period,
                                                           std::size_t bit_budget) {
  if (max_period < 1)
    throw PwcError(Errc::precondition_failed, "max period must be >= 1");
  std::vector<PeriodicOrbitRecord> records;
  std::set<Rational> seen;
  struct Cyl {
    SidedInterval support;
    Rational slope, intercept;
  };
  std::vector<Cyl> cyls;
  for (const auto& p : map.pieces()) cyls.push_back({p.domain, p.slope, p.intercept});
  for (std::size_t depth = 1; depth <= max_period; ++depth) {
    if (depth > 1) {
      std::vector<Cyl> next;
      for (const auto& c : cyls) {
        SidedInterval image = c.support.affine_image(c.slope, c.intercept);
        for (const auto& p : map.pieces()) {
          auto overlap = image.intersect(p.domain);
          if (!overlap) continue;
          next.push_back({overlap->affine_preimage(c.slope, c.intercept), p.slope * c.slope,
                          p.slope * c.intercept + p.intercept});
        }
      }
      cyls = std::move(next);
    }
    for (const auto& c : cyls) {
      Rational fx = c.intercept / (1 - c.slope);
      if (!c.support.contains(fx) || seen.count(fx)) continue;
      if (bit_budget != 0 && bit_size(fx) > bit_budget)
        throw PwcError(Errc::arithmetic_budget_exceeded,
                       "periodic point exceeds " + std::to_string(bit_budget) + " bits");
      std::vector<Rational> cycle{fx};
      for (Rational cur = map.evaluate(fx); cur != fx; cur = map.evaluate(cur))
        cycle.push_back(cur);
      for (const auto& p : cycle) seen.insert(p);
      records.push_back(make_record(map, std::move(cycle)));
    }
  }
  // canonical order: by (period, least point)
  std::sort(records.begin(), records.end(),
            [](const PeriodicOrbitRecord& a, const PeriodicOrbitRecord& b) {
              if (a.period != b.period) return a.period < b.period;
              return a.least_point() < b.least_point();
            });
  return records;
}

namespace {

// Closed-interval machinery for the exact linear-constraint stage of the
// trapping-interval computation; open/closed flags are settled afterwards.
struct ClosedIv {
  Rational lo, hi;
  bool operator==(const ClosedIv&) const = default;
};

struct Chunk {
  Rational lo, hi;  // sub-domain of the feasible box
  Rational slope, intercept;
};

struct CellSystem {
  std::vector<ClosedIv> cells;             // per-step closed cell the iterate must stay in
  std::vector<std::set<int>> allowed;      // 1-based pieces usable inside the cell
};

std::optional<ClosedIv> component_containing(std::vector<ClosedIv> parts, const Rational& p) {
  std::sort(parts.begin(), parts.end(),
            [](const ClosedIv& a, const ClosedIv& b) { return a.lo < b.lo; });
  std::vector<ClosedIv> merged;
  for (auto& part : parts) {
    if (!merged.empty() && part.lo <= merged.back().hi)
      merged.back().hi = std::max(merged.back().hi, part.hi);
    else
      merged.push_back(std::move(part));
  }
  for (auto& part : merged)
    if (part.lo <= p && p <= part.hi) return part;
  return std::nullopt;
}

// {x in cells[step] : f(x) in target}, piece by piece over the allowed set.
std::vector<ClosedIv> step_preimage(const PiecewiseAffineContraction& map, const CellSystem& sys,
                                    std::size_t step, const ClosedIv& target) {
  std::vector<ClosedIv> parts;
  for (int j : sys.allowed[step]) {
    const auto& pc = map.pieces()[j - 1];
    Rational lo = std::max(sys.cells[step].lo, pc.domain.lo);
    Rational hi = std::min(sys.cells[step].hi, pc.domain.hi);
    if (lo > hi) continue;
    Rational u = (target.lo - pc.intercept) / pc.slope;
    Rational v = (target.hi - pc.intercept) / pc.slope;
    if (u > v) std::swap(u, v);
    lo = std::max(lo, u);
    hi = std::min(hi, v);
    if (lo <= hi) parts.push_back({std::move(lo), std::move(hi)});
  }
  return parts;
}

// Image of `from` under f restricted to cells[step]; merged cells are only
// created across value-matching breakpoints, so the image is an interval.
ClosedIv step_image(const PiecewiseAffineContraction& map, const CellSystem& sys, std::size_t step,
                    const ClosedIv& from) {
  std::optional<ClosedIv> out;
  for (int j : sys.allowed[step]) {
    const auto& pc = map.pieces()[j - 1];
    Rational lo = std::max({sys.cells[step].lo, pc.domain.lo, from.lo});
    Rational hi = std::min({sys.cells[step].hi, pc.domain.hi, from.hi});
    if (lo > hi) continue;
    Rational u = pc.apply(lo), v = pc.apply(hi);
    if (u > v) std::swap(u, v);
    if (!out) {
      out = ClosedIv{std::move(u), std::move(v)};
    } else {
      out->lo = std::min(out->lo, u);
      out->hi = std::max(out->hi, v);
    }
  }
  if (!out) throw PwcError(Errc::precondition_failed, "iterate left its continuity cell");
  return *out;
}

// Largest closed interval around the orbit whose iterates stay in the cells.
ClosedIv feasible_box(const PiecewiseAffineContraction& map, const CellSystem& sys,
                      const std::vector<Rational>& points) {
  const std::size_t k = points.size();
  ClosedIv box = sys.cells[k - 1];
  for (std::size_t step = k - 1; step-- > 0;) {
    auto comp = component_containing(step_preimage(map, sys, step, box), points[step]);
    if (!comp) throw PwcError(Errc::precondition_failed, "trapping constraints are infeasible");
    box = *comp;
  }
  return box;
}

// Exact piecewise form of f^k on the feasible box.
std::vector<Chunk> compose_chunks(const PiecewiseAffineContraction& map, const CellSystem& sys,
                                  const ClosedIv& box) {
  std::vector<Chunk> chunks{{box.lo, box.hi, 1, 0}};
  for (std::size_t step = 0; step < sys.cells.size(); ++step) {
    std::vector<Chunk> next;
    for (const auto& ch : chunks) {
      Rational iu = ch.slope * ch.lo + ch.intercept;
      Rational iv = ch.slope * ch.hi + ch.intercept;
      if (iu > iv) std::swap(iu, iv);
      for (int j : sys.allowed[step]) {
        const auto& pc = map.pieces()[j - 1];
        Rational lo = std::max({sys.cells[step].lo, pc.domain.lo, iu});
        Rational hi = std::min({sys.cells[step].hi, pc.domain.hi, iv});
        if (lo > hi) continue;
        Rational x1 = (lo - ch.intercept) / ch.slope;
        Rational x2 = (hi - ch.intercept) / ch.slope;
        if (x1 > x2) std::swap(x1, x2);
        x1 = std::max(x1, ch.lo);
        x2 = std::min(x2, ch.hi);
        if (x1 > x2) continue;
        next.push_back({std::move(x1), std::move(x2), pc.slope * ch.slope,
                        pc.slope * ch.intercept + pc.intercept});
      }
    }
    std::sort(next.begin(), next.end(),
              [](const Chunk& a, const Chunk& b) { return a.lo < b.lo; });
    chunks = std::move(next);
  }
  return chunks;
}

// Component of the periodic point inside the maximal invariant set of f^k in
// the box; equals the (closed) maximal trapping interval.  The backward map
// expands by at least 1/kappa per round, so the iteration settles quickly.
ClosedIv maximal_invariant(const std::vector<Chunk>& chunks, const ClosedIv& box,
                           const Rational& p) {
  ClosedIv J = box;
  for (int iter = 0; iter < 10000; ++iter) {
    std::vector<ClosedIv> parts;
    for (const auto& ch : chunks) {
      Rational lo = std::max(ch.lo, J.lo);
      Rational hi = std::min(ch.hi, J.hi);
      if (lo > hi) continue;
      Rational x1 = (J.lo - ch.intercept) / ch.slope;
      Rational x2 = (J.hi - ch.intercept) / ch.slope;
      if (x1 > x2) std::swap(x1, x2);
      lo = std::max(lo, x1);
      hi = std::min(hi, x2);
      if (lo <= hi) parts.push_back({std::move(lo), std::move(hi)});
    }
    auto comp = component_containing(std::move(parts), p);
    if (!comp) throw PwcError(Errc::precondition_failed, "invariant component lost its owner");
    if (*comp == J) return J;
    J = *comp;
  }
  throw PwcError(Errc::precondition_failed, "trapping interval iteration did not settle");
}

std::optional<int> piece_with_hi(const PiecewiseAffineContraction& map, const Rational& x) {
  for (std::size_t i = 0; i < map.piece_count(); ++i)
    if (map.pieces()[i].domain.hi == x) return static_cast<int>(i) + 1;
  return std::nullopt;
}

std::optional<int> piece_with_lo(const PiecewiseAffineContraction& map, const Rational& x) {
  for (std::size_t i = 0; i < map.piece_count(); ++i)
    if (map.pieces()[i].domain.lo == x) return static_cast<int>(i) + 1;
  return std::nullopt;
}

// One-sided limits agree at the breakpoint, so images of the two sides abut
// exactly and an interval may straddle it.
bool continuous_at(const PiecewiseAffineContraction& map, const Rational& x) {
  auto l = piece_with_hi(map, x);
  auto r = piece_with_lo(map, x);
  return l && r && map.pieces()[*l - 1].apply(x) == map.pieces()[*r - 1].apply(x);
}

// If an iterate of J binds against a cell end that sits on a value-matching
// breakpoint, widen that cell across the breakpoint and report true.
bool widen_binding_cells(const PiecewiseAffineContraction& map, CellSystem& sys,
                         const ClosedIv& J) {
  bool any = false;
  ClosedIv F = J;
  for (std::size_t step = 0; step < sys.cells.size(); ++step) {
    auto& cell = sys.cells[step];
    auto& allowed = sys.allowed[step];
    if (F.lo == cell.lo && cell.lo > 0 && cell.lo < 1 && continuous_at(map, cell.lo)) {
      if (auto left = piece_with_hi(map, cell.lo); left && !allowed.count(*left)) {
        allowed.insert(*left);
        cell.lo = map.pieces()[*left - 1].domain.lo;
        any = true;
      }
    }
    if (F.hi == cell.hi && cell.hi > 0 && cell.hi < 1 && continuous_at(map, cell.hi)) {
      if (auto right = piece_with_lo(map, cell.hi); right && !allowed.count(*right)) {
        allowed.insert(*right);
        cell.hi = map.pieces()[*right - 1].domain.hi;
        any = true;
      }
    }
    F = step_image(map, sys, step, F);
  }
  return any;
}

}  // namespace

TrappingInterval maximal_trapping_interval(const PiecewiseAffineContraction& map, const Rational& p,
                                           std::size_t period) {
  if (period < 1) throw PwcError(Errc::precondition_failed, "period must be >= 1");
  std::vector<Rational> points = map.orbit(p, period);
  if (points.back() != p)
    throw PwcError(Errc::precondition_failed,
                   to_fraction_string(p) + " is not periodic with period " + std::to_string(period));
  points.pop_back();
  if (classify_points(map, points).kind == OrbitKind::degenerate)
    throw PwcError(Errc::degenerate_owner,
                   "no trapping interval exists for degenerate owner " + to_fraction_string(p));

  CellSystem sys;
  for (const auto& x : points) {
    const auto& d = map.pieces()[map.piece_index(x) - 1].domain;
    sys.cells.push_back({d.lo, d.hi});
    sys.allowed.push_back({map.piece_index(x)});
  }

  bool used_merged = false;
  ClosedIv J{p, p};
  for (std::size_t round = 0; round <= map.piece_count() * period; ++round) {
    ClosedIv box = feasible_box(map, sys, points);
    J = maximal_invariant(compose_chunks(map, sys, box), box, p);
    if (!widen_binding_cells(map, sys, J)) break;
    used_merged = true;
  }
  if (J.lo == J.hi)
    throw PwcError(Errc::precondition_failed,
                   "trapping interval of " + to_fraction_string(p) + " degenerates to a point");

  // Settle the endpoint flags: an endpoint can be included only if its own
  // forward orbit follows the same cells, and only if the closed image does
  // not re-inject an excluded endpoint.
  bool lo_c = true;
  bool hi_c = J.hi < 1;
  auto trace_ok = [&](const Rational& z0) {
    Rational z = z0;
    for (std::size_t step = 0; step < period; ++step) {
      if (z < 0 || z >= 1) return false;
      int j = map.piece_index(z);
      if (!sys.allowed[step].count(j)) return false;
      z = map.pieces()[j - 1].apply(z);
    }
    return true;
  };
  if (lo_c && !trace_ok(J.lo)) lo_c = false;
  if (hi_c && !trace_ok(J.hi)) hi_c = false;

  auto iterate_k = [&](Rational z) {
    for (std::size_t step = 0; step < period; ++step) z = map.evaluate(z);
    return z;
  };
  bool settled = false;
  for (int guard = 0; guard < 4 && !settled; ++guard) {
    SidedInterval cand(J.lo, J.hi, lo_c, hi_c);
    std::optional<SidedInterval> img = cand;
    for (std::size_t step = 0; step < period && img; ++step) {
      auto list = map.image_interval(*img);
      img = list.size() == 1 ? std::optional<SidedInterval>(list.front()) : std::nullopt;
    }
    if (img && img->subset_of(cand)) {
      settled = true;
      break;
    }
    bool changed = false;
    auto open_source_of = [&](const Rational& value) {
      if (lo_c && iterate_k(J.lo) == value) {
        lo_c = false;
        changed = true;
      } else if (hi_c && iterate_k(J.hi) == value) {
        hi_c = false;
        changed = true;
      }
    };
    if (img) {
      if (img->lo == cand.lo && img->lo_closed && !cand.lo_closed) open_source_of(img->lo);
      if (img->hi == cand.hi && img->hi_closed && !cand.hi_closed) open_source_of(img->hi);
    } else if (lo_c) {
      lo_c = false;
      changed = true;
    } else if (hi_c) {
      hi_c = false;
      changed = true;
    }
    if (!changed)
      throw PwcError(Errc::precondition_failed, "could not settle trapping endpoint flags");
  }
  if (!settled)
    throw PwcError(Errc::precondition_failed, "could not settle trapping endpoint flags");

  SidedInterval interval(J.lo, J.hi, lo_c, hi_c);
  if (!interval.contains(p))
    throw PwcError(Errc::precondition_failed, "trapping interval lost its owner");
  return {p, std::move(interval), period, used_merged};
}

TrappingRegion trapping_region(const PiecewiseAffineContraction& map,
                               const PeriodicOrbitRecord& orbit) {
  TrappingRegion region;
  region.orbit = orbit;
  for (const auto& pt : orbit.points)
    region.components.push_back(maximal_trapping_interval(map, pt, orbit.period));
  const std::size_t k = region.components.size();
  for (std::size_t i = 0; i < k; ++i) {
    auto img = map.image_interval(region.components[i].interval);
    if (img.size() != 1 || !img.front().subset_of(region.components[(i + 1) % k].interval))
      throw PwcError(Errc::precondition_failed, "trapping region is not forward invariant");
    for (std::size_t j = i + 1; j < k; ++j)
      if (!region.components[i].interval.disjoint_from(region.components[j].interval))
        throw PwcError(Errc::precondition_failed, "trapping components overlap");
  }
  return region;
}

CensusVerdict census_verdict(const PiecewiseAffineContraction& map, const CensusOptions& options) {
  CensusVerdict verdict;
  verdict.orbits = enumerate_periodic_orbits(map, options.max_period, options.bit_budget);
  for (const auto& rec : verdict.orbits)
    (rec.kind == OrbitKind::regular ? verdict.regular_count : verdict.degenerate_count) += 1;
  verdict.piece_count = map.piece_count();
  const std::size_t total = verdict.regular_count + verdict.degenerate_count;
  verdict.bound_ok = total <= verdict.piece_count;
  verdict.tight = total == verdict.piece_count;
  if (verdict.tight && options.grid_seeds > 0) {
    ConvergenceEvidence ev;
    ev.seeds = options.grid_seeds;
    std::vector<Rational> targets;
    for (const auto& rec : verdict.orbits)
      targets.insert(targets.end(), rec.points.begin(), rec.points.end());
    for (std::size_t s = 0; s < options.grid_seeds; ++s) {
      Rational x(static_cast<long long>(2 * s + 1), static_cast<long long>(2 * options.grid_seeds));
      bool converged = false;
      for (std::size_t step = 0; step <= options.grid_max_steps && !converged; ++step) {
        for (const auto& t : targets) {
          if (rational_abs(x - t) <= options.grid_tolerance) {
            converged = true;
            break;
          }
        }
        if (!converged) x = map.evaluate(x);
      }
      if (converged) ++ev.converged;
    }
    verdict.evidence = ev;
  }
  return verdict;
}

std::vector<AppendixACensusEntry> appendix_a_census(const PiecewiseAffineContraction& map,
                                                    std::size_t max_period) {
  for (const auto& pc : map.pieces())
    if (pc.slope <= 0 || !pc.domain.lo_closed || pc.domain.hi_closed)
      throw PwcError(Errc::precondition_failed,
                     "requires increasing pieces on left-closed domains");
  const auto interior = map.interior_breakpoints();
  std::vector<AppendixACensusEntry> out;
  std::set<Rational> assigned;
  for (auto& orbit : enumerate_periodic_orbits(map, max_period)) {
    const Rational p = orbit.least_point();
    // Right end of the basin: nearest point above p that reaches a breakpoint
    // within one period (1 when nothing does).
    Rational eps = 1;
    for (const Rational& x : interior) {
      Rational y = x;
      for (std::size_t l = 0; l < orbit.period; ++l) {
        if (y > p && y < eps) eps = y;
        auto pre = map.preimage_point(y);
        if (!pre) break;
        y = *pre;
      }
    }
    // Push the basin's right end forward along the branch the basin occupies
    // until it lands on a breakpoint (or is 1 outright).
    Rational e = eps;
    Rational cur = p;
    std::optional<Rational> alpha;
    for (std::size_t l = 0; l < orbit.period && !alpha; ++l) {
      if (e == 1) {
        alpha = Rational(1);
        break;
      }
      if (std::find(interior.begin(), interior.end(), e) != interior.end()) {
        alpha = e;
        break;
      }
      const auto& pc = map.pieces()[map.piece_index(cur) - 1];
      e = pc.apply(e);
      cur = map.evaluate(cur);
    }
    if (!alpha)
      throw PwcError(Errc::precondition_failed,
                     "no breakpoint assignment for orbit at " + to_fraction_string(p));
    if (!assigned.insert(*alpha).second)
      throw PwcError(Errc::precondition_failed, "breakpoint assignment collides");
    out.push_back({std::move(orbit), eps, SidedInterval::half_open(p, eps), *alpha});
  }
  return out;
}

}  // namespace pwc
