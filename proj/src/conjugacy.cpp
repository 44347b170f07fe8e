#include "pwc/conjugacy.hpp"

#include <algorithm>

namespace pwc {

NuMeasure make_nu(GapAtlas atlas) {
  if (atlas.layers.empty())
    throw PwcError(Errc::precondition_failed, "measure needs a propagated atlas");
  return {std::move(atlas)};
}

Enclosure nu_of_interval(const NuMeasure& measure, const SidedInterval& J) {
  if (J.lo < 0 || J.hi > 1)
    throw PwcError(Errc::out_of_domain, "interval " + J.str() + " outside [0,1)");
  // The measure is non-atomic, so endpoint flags are irrelevant; everything
  // below is pure length arithmetic.
  if (J.is_point()) return {0, 0};
  const Rational r(static_cast<long>(measure.r()));
  Rational sum = 0;
  Rational covered = 0;
  for (const auto& per_gap : measure.atlas.layers) {
    Rational level_mass = Rational(1, 2) / r;  // mass of a layer at level l
    for (const auto& layer : per_gap) {
      const auto& Y = layer.interval;
      Rational lo = std::max(J.lo, Y.lo);
      Rational hi = std::min(J.hi, Y.hi);
      if (hi > lo) {
        sum += level_mass * (hi - lo) / Y.length();
        covered += hi - lo;
      }
      level_mass /= 2;
    }
  }
  if (covered == J.length()) return {sum, sum};  // layers cover J: exact
  Rational tail = rational_pow(Rational(1, 2), static_cast<unsigned long>(measure.atlas.depth) + 1);
  return {sum, sum + tail};
}

ConjugacyTable build_conjugacy_table(const PiecewiseAffineContraction& map, std::size_t depth) {
  ConjugacyTable table;
  table.measure = make_nu(propagate(map, compute_F(map), depth));
  table.depth = depth;
  for (const Rational& x : map.interior_breakpoints())
    table.breakpoint_images.push_back(
        nu_of_interval(table.measure, SidedInterval::open(0, x)));
  return table;
}

Enclosure h_value(const ConjugacyTable& table, const Rational& x) {
  if (x < 0 || x >= 1)
    throw PwcError(Errc::out_of_domain, to_fraction_string(x) + " outside [0,1)");
  if (x == 0) return {0, 0};
  return nu_of_interval(table.measure, SidedInterval::open(0, x));
}

Enclosure h_inverse(const ConjugacyTable& table, const Rational& y, const Rational& tol) {
  if (y < 0 || y >= 1)
    throw PwcError(Errc::out_of_domain, to_fraction_string(y) + " outside [0,1)");
  if (tol <= 0) throw PwcError(Errc::precondition_failed, "tolerance must be positive");
  Rational lo = 0, hi = 1;
  while (hi - lo > tol) {
    Rational mid = (lo + hi) / 2;
    Enclosure e = h_value(table, mid);
    if (e.hi <= y) {
      lo = mid;
    } else if (e.lo >= y) {
      hi = mid;
    } else {
      // the midpoint enclosure straddles y: try certified quarter points
      Rational q1 = lo + (hi - lo) / 4;
      Rational q3 = hi - (hi - lo) / 4;
      if (Enclosure e1 = h_value(table, q1); e1.hi <= y) {
        lo = q1;
      } else if (Enclosure e3 = h_value(table, q3); e3.lo >= y) {
        hi = q3;
      } else {
        throw PwcError(Errc::resolution_exceeded,
                       "cannot separate " + to_fraction_string(y) + " at this depth");
      }
    }
  }
  return {std::move(lo), std::move(hi)};
}

SlopeReport verify_half_slopes(const PiecewiseAffineContraction& map, const ConjugacyTable& table,
                               std::size_t samples_per_piece, const Rational& tol) {
  if (samples_per_piece < 1)
    throw PwcError(Errc::precondition_failed, "need at least one sample pair");
  SlopeReport report;
  report.all_ok = true;
  for (std::size_t i = 0; i < map.piece_count(); ++i) {
    const auto& pc = map.pieces()[i];
    PieceSlopeReport pr;
    pr.piece = static_cast<int>(i) + 1;
    pr.expected = pc.slope > 0 ? Rational(1, 2) : Rational(-1, 2);
    // samples_per_piece adjacent pairs over samples_per_piece + 1 interior points
    Rational step = pc.domain.length() / Rational(static_cast<long>(samples_per_piece) + 2);
    for (std::size_t t = 0; t + 1 <= samples_per_piece; ++t) {
      Rational a = pc.domain.lo + step * Rational(static_cast<long>(t) + 1);
      Rational b = a + step;
      Enclosure ha = h_value(table, a);
      Enclosure hb = h_value(table, b);
      Enclosure hfa = h_value(table, map.evaluate(a));
      Enclosure hfb = h_value(table, map.evaluate(b));
      Enclosure num{hfb.lo - hfa.hi, hfb.hi - hfa.lo};
      Enclosure den{hb.lo - ha.hi, hb.hi - ha.lo};
      if (den.lo <= 0)
        throw PwcError(Errc::resolution_exceeded,
                       "h enclosures cannot separate samples at this depth");
      Rational c1 = num.lo / den.lo, c2 = num.lo / den.hi;
      Rational c3 = num.hi / den.lo, c4 = num.hi / den.hi;
      Enclosure quot{std::min({c1, c2, c3, c4}), std::max({c1, c2, c3, c4})};
      Rational dev = std::max(rational_abs(quot.lo - pr.expected),
                              rational_abs(quot.hi - pr.expected));
      pr.max_deviation = std::max(pr.max_deviation, dev);
      pr.samples.push_back({std::move(a), std::move(b), std::move(quot)});
    }
    pr.ok = pr.max_deviation <= tol;
    report.all_ok = report.all_ok && pr.ok;
    report.pieces.push_back(std::move(pr));
  }
  return report;
}

SnappedNormalForm snap_normal_form(const PiecewiseAffineContraction& map,
                                   const ConjugacyTable& table) {
  SnappedNormalForm out;
  std::vector<Rational> cuts{0};
  for (const auto& e : table.breakpoint_images) cuts.push_back(e.mid());
  cuts.push_back(1);
  for (std::size_t i = 0; i < map.piece_count(); ++i) {
    const auto& pc = map.pieces()[i];
    Rational s = pc.slope > 0 ? Rational(1, 2) : Rational(-1, 2);
    Rational c = (pc.domain.lo + pc.domain.hi) / 2;  // anchor inside the piece
    Rational a = h_value(table, c).mid();
    Rational b = h_value(table, map.evaluate(c)).mid();
    out.pieces.push_back({s, b - s * a,
                          SidedInterval(cuts[i], cuts[i + 1], pc.domain.lo_closed,
                                        pc.domain.hi_closed)});
  }
  return out;
}

}  // namespace pwc
