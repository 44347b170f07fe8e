#include "pwc/map.hpp"

#include <algorithm>
#include <map>

namespace pwc {

namespace {
const SidedInterval kUnitDomain = SidedInterval::half_open(0, 1);
}

std::string violation_name(Violation v) {
  switch (v) {
    case Violation::not_partition: return "NotPartition";
    case Violation::not_injective: return "NotInjective";
    case Violation::non_contractive: return "NonContractive";
    case Violation::zero_slope: return "ZeroSlope";
    case Violation::image_escapes: return "ImageEscapes";
  }
  return "?";
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::out_of_domain: return "OutOfDomain";
    case Errc::arithmetic_budget_exceeded: return "ArithmeticBudgetExceeded";
    case Errc::degenerate_owner: return "DegenerateOwner";
    case Errc::precondition_failed: return "PreconditionFailed";
    case Errc::layer_hit_breakpoint: return "LayerHitBreakpoint";
    case Errc::beta_hit_not_found: return "BetaHitNotFound";
    case Errc::resolution_exceeded: return "ResolutionExceeded";
    case Errc::not_inward: return "NotInward";
    case Errc::corner_hit: return "CornerHit";
    case Errc::non_injective: return "NonInjective";
    case Errc::incommensurable_edges: return "IncommensurableEdges";
    case Errc::generation_failed: return "GenerationFailed";
    case Errc::empty_chain: return "EmptyChain";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::unknown_kind: return "UnknownKind";
  }
  return "?";
}

PiecewiseAffineContraction::PiecewiseAffineContraction(std::vector<AffinePiece> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("map needs at least one piece");
  std::sort(pieces_.begin(), pieces_.end(),
            [](const AffinePiece& a, const AffinePiece& b) { return a.domain.lo < b.domain.lo; });
  breakpoints_.push_back(pieces_.front().domain.lo);
  for (const auto& p : pieces_) breakpoints_.push_back(p.domain.hi);
}

std::vector<Rational> PiecewiseAffineContraction::interior_breakpoints() const {
  return {breakpoints_.begin() + 1, breakpoints_.end() - 1};
}

ValidationReport PiecewiseAffineContraction::validate() const {
  ValidationReport report;
  auto add = [&report](Violation v, std::string what) {
    report.violations.emplace_back(v, std::move(what));
  };

  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (p.slope == 0)
      add(Violation::zero_slope, "piece " + std::to_string(i + 1));
    else if (rational_abs(p.slope) >= 1)
      add(Violation::non_contractive,
          "piece " + std::to_string(i + 1) + " slope " + to_fraction_string(p.slope));
  }

  const auto& first = pieces_.front().domain;
  if (first.lo != 0 || !first.lo_closed)
    add(Violation::not_partition, "domain must start with 0 owned by piece 1");
  const auto& last = pieces_.back().domain;
  if (last.hi != 1 || last.hi_closed)
    add(Violation::not_partition, "domain must end open at 1");
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const auto& a = pieces_[i].domain;
    const auto& b = pieces_[i + 1].domain;
    if (a.hi != b.lo)
      add(Violation::not_partition, "pieces " + std::to_string(i + 1) + "/" +
                                        std::to_string(i + 2) + " leave a gap or overlap");
    else if (a.hi_closed == b.lo_closed)
      add(Violation::not_partition,
          "breakpoint " + to_fraction_string(a.hi) +
              (a.hi_closed ? " owned by both pieces" : " owned by neither piece"));
  }

  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].slope == 0) continue;
    SidedInterval img = pieces_[i].image();
    if (!img.subset_of(kUnitDomain))
      add(Violation::image_escapes, "piece " + std::to_string(i + 1) + " image " + img.str());
    for (std::size_t j = i + 1; j < pieces_.size(); ++j) {
      if (pieces_[j].slope == 0) continue;
      if (!img.disjoint_from(pieces_[j].image()))
        add(Violation::not_injective,
            "images of pieces " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                " intersect");
    }
  }

  if (report.ok()) report.kappa = kappa();
  return report;
}

Rational PiecewiseAffineContraction::kappa() const {
  Rational k = 0;
  for (const auto& p : pieces_) k = std::max(k, rational_abs(p.slope));
  return k;
}

void PiecewiseAffineContraction::require_in_domain(const Rational& x) const {
  if (x < 0 || x >= 1)
    throw PwcError(Errc::out_of_domain, to_fraction_string(x) + " outside [0,1)");
}

int PiecewiseAffineContraction::piece_index(const Rational& x) const {
  require_in_domain(x);
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].domain.contains(x)) return static_cast<int>(i) + 1;
  throw PwcError(Errc::out_of_domain, "no piece owns " + to_fraction_string(x));
}

Rational PiecewiseAffineContraction::evaluate(const Rational& x) const {
  return pieces_[piece_index(x) - 1].apply(x);
}

IntervalList PiecewiseAffineContraction::image_interval(const SidedInterval& J) const {
  if (!J.subset_of(kUnitDomain))
    throw PwcError(Errc::out_of_domain, "interval " + J.str() + " outside [0,1)");
  IntervalList parts;
  for (const auto& p : pieces_)
    if (auto chunk = J.intersect(p.domain))
      parts.push_back(chunk->affine_image(p.slope, p.intercept));
  return normalize_union(std::move(parts));
}

std::optional<Rational> PiecewiseAffineContraction::preimage_point(const Rational& y) const {
  require_in_domain(y);
  for (const auto& p : pieces_) {
    Rational x = (y - p.intercept) / p.slope;
    if (p.domain.contains(x)) return x;
  }
  return std::nullopt;
}

std::vector<Rational> PiecewiseAffineContraction::orbit(const Rational& x, std::size_t steps,
                                                        std::size_t bit_budget) const {
  std::vector<Rational> out;
  out.reserve(steps + 1);
  out.push_back(x);
  for (std::size_t i = 0; i < steps; ++i) {
    out.push_back(evaluate(out.back()));
    if (bit_budget != 0 && bit_size(out.back()) > bit_budget)
      throw PwcError(Errc::arithmetic_budget_exceeded,
                     "orbit denominators exceed " + std::to_string(bit_budget) + " bits");
  }
  return out;
}

ItineraryWord PiecewiseAffineContraction::itinerary(const Rational& x, std::size_t length) const {
  ItineraryWord word;
  word.reserve(length);
  Rational cur = x;
  for (std::size_t i = 0; i < length; ++i) {
    word.push_back(piece_index(cur));
    cur = pieces_[word.back() - 1].apply(cur);
  }
  return word;
}

std::vector<Cylinder> PiecewiseAffineContraction::cylinders(std::size_t k) const {
  if (k < 1) throw PwcError(Errc::precondition_failed, "cylinder depth must be >= 1");
  std::vector<Cylinder> cyls;
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    cyls.push_back({pieces_[i].domain, {static_cast<int>(i) + 1}, pieces_[i].slope,
                    pieces_[i].intercept});
  for (std::size_t depth = 1; depth < k; ++depth) {
    std::vector<Cylinder> next;
    for (const auto& c : cyls) {
      SidedInterval image = c.support.affine_image(c.composed_slope, c.composed_intercept);
      for (std::size_t i = 0; i < pieces_.size(); ++i) {
        auto overlap = image.intersect(pieces_[i].domain);
        if (!overlap) continue;
        SidedInterval sub = overlap->affine_preimage(c.composed_slope, c.composed_intercept);
        ItineraryWord word = c.word;
        word.push_back(static_cast<int>(i) + 1);
        next.push_back({std::move(sub), std::move(word), pieces_[i].slope * c.composed_slope,
                        pieces_[i].slope * c.composed_intercept + pieces_[i].intercept});
      }
    }
    cyls = std::move(next);
  }
  std::sort(cyls.begin(), cyls.end(), [](const Cylinder& a, const Cylinder& b) {
    if (a.support.lo != b.support.lo) return a.support.lo < b.support.lo;
    return a.support.lo_closed && !b.support.lo_closed;
  });
  return cyls;
}

IntervalList PiecewiseAffineContraction::range() const { return image_interval(kUnitDomain); }

PiecewisePolynomial PiecewisePolynomial::identity() {
  return {{{kUnitDomain, {Rational(0), Rational(1)}}}};
}

Rational PiecewisePolynomial::evaluate(const Rational& x) const {
  for (const auto& p : pieces) {
    if (!p.domain.contains(x)) continue;
    Rational value = 0;
    for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it)
      value = value * x + *it;
    return value;
  }
  throw PwcError(Errc::out_of_domain, "observable undefined at " + to_fraction_string(x));
}

Rational birkhoff_average(const PiecewiseAffineContraction& map, const PiecewisePolynomial& phi,
                          const Rational& x, std::size_t k) {
  if (k < 1) throw PwcError(Errc::precondition_failed, "birkhoff average needs k >= 1");
  Rational sum = 0;
  Rational cur = x;
  for (std::size_t i = 0; i < k; ++i) {
    sum += phi.evaluate(cur);
    if (i + 1 < k) cur = map.evaluate(cur);
  }
  return sum / Rational(k);
}

namespace {

Rational cycle_average(const PiecewisePolynomial& phi, std::vector<Rational> cycle) {
  std::sort(cycle.begin(), cycle.end());
  cycle.erase(std::unique(cycle.begin(), cycle.end()), cycle.end());
  Rational sum = 0;
  for (const auto& p : cycle) sum += phi.evaluate(p);
  return sum / Rational(cycle.size());
}

// Certifies that the iterate at position t - 2q converges to the germ cycle
// seeded at the fixed point of the composed map over the last 2q symbols.
// Over 2q steps the slope product is a positive contraction factor, so each
// later iterate lies strictly between the periodic point and the certified
// one; the flag-aware containment check then pins the piece sequence forever.
std::optional<std::vector<Rational>> certify_tail_cycle(
    const PiecewiseAffineContraction& map, const std::vector<Rational>& points,
    const ItineraryWord& word, std::size_t t, std::size_t q) {
  const std::size_t window = 2 * q;
  if (t < window) return std::nullopt;
  const std::size_t start = t - window;
  Rational slope = 1, intercept = 0;
  for (std::size_t j = 0; j < window; ++j) {
    const auto& piece = map.pieces()[word[start + j] - 1];
    slope = piece.slope * slope;
    intercept = piece.slope * intercept + piece.intercept;
  }
  Rational p = intercept / (1 - slope);
  std::vector<Rational> cycle;
  for (std::size_t j = 0; j < window; ++j) {
    const auto& piece = map.pieces()[word[start + j] - 1];
    const Rational& y = points[start + j];
    if (y == p) return std::nullopt;  // exact cycle path handles this
    SidedInterval germ = y > p ? SidedInterval(p, y, false, true) : SidedInterval(y, p, true, false);
    if (!germ.subset_of(piece.domain)) return std::nullopt;
    cycle.push_back(p);
    p = piece.apply(p);
  }
  return cycle;
}

}  // namespace

std::optional<Rational> birkhoff_limit(const PiecewiseAffineContraction& map,
                                       const PiecewisePolynomial& phi, const Rational& x,
                                       std::size_t max_steps) {
  std::vector<Rational> points{x};
  ItineraryWord word;
  std::map<Rational, std::size_t> seen{{x, 0}};
  for (std::size_t t = 1; t <= max_steps; ++t) {
    word.push_back(map.piece_index(points.back()));
    points.push_back(map.pieces()[word.back() - 1].apply(points.back()));
    auto [it, fresh] = seen.emplace(points.back(), t);
    if (!fresh) {
      // exact return: the orbit from it->second on is the cycle
      std::vector<Rational> cycle(points.begin() + static_cast<long>(it->second),
                                  points.end() - 1);
      return cycle_average(phi, std::move(cycle));
    }
    if (t % 8 != 0 && t != max_steps) continue;
    for (std::size_t q = 1; 3 * q <= t; ++q) {
      bool periodic = true;
      for (std::size_t j = t - 2 * q; j < t - q && periodic; ++j)
        periodic = word[j] == word[j + q];
      if (!periodic) continue;
      if (auto cycle = certify_tail_cycle(map, points, word, t, q))
        return cycle_average(phi, std::move(*cycle));
    }
  }
  return std::nullopt;
}

}  // namespace pwc
