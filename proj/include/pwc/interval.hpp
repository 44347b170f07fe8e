#pragma once

#include "pwc/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwc {

/// Interval with exact rational endpoints and per-endpoint open/closed flags.
/// The universal set currency of the library: continuity intervals, image
/// components, gaps, cylinders and trapping intervals are all of this type.
/// Invariant: lo < hi, or lo == hi with both flags closed (a single point,
/// which arises as the image of a point).
struct SidedInterval {
  Rational lo;
  Rational hi;
  bool lo_closed = true;
  bool hi_closed = false;

  SidedInterval(Rational lo_, Rational hi_, bool lo_closed_, bool hi_closed_)
      : lo(std::move(lo_)), hi(std::move(hi_)), lo_closed(lo_closed_), hi_closed(hi_closed_) {
    if (lo > hi || (lo == hi && !(lo_closed && hi_closed)))
      throw std::invalid_argument("degenerate SidedInterval");
  }

  static SidedInterval open(Rational a, Rational b) {
    return {std::move(a), std::move(b), false, false};
  }
  static SidedInterval closed(Rational a, Rational b) {
    return {std::move(a), std::move(b), true, true};
  }
  static SidedInterval half_open(Rational a, Rational b) {  // [a, b)
    return {std::move(a), std::move(b), true, false};
  }
  static SidedInterval point(Rational a) {
    Rational b = a;
    return {std::move(a), std::move(b), true, true};
  }

  bool is_point() const { return lo == hi; }
  Rational length() const { return hi - lo; }

  bool contains(const Rational& x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
  }

  /// Image under x -> slope*x + intercept; flags swap when slope < 0.
  SidedInterval affine_image(const Rational& slope, const Rational& intercept) const {
    Rational a = slope * lo + intercept;
    Rational b = slope * hi + intercept;
    if (slope >= 0) return {std::move(a), std::move(b), lo_closed, hi_closed};
    return {std::move(b), std::move(a), hi_closed, lo_closed};
  }

  /// Preimage under the same map (slope != 0).
  SidedInterval affine_preimage(const Rational& slope, const Rational& intercept) const {
    Rational a = (lo - intercept) / slope;
    Rational b = (hi - intercept) / slope;
    if (slope > 0) return {std::move(a), std::move(b), lo_closed, hi_closed};
    return {std::move(b), std::move(a), hi_closed, lo_closed};
  }

  std::optional<SidedInterval> intersect(const SidedInterval& other) const;

  /// Flag-aware: every point of *this is a point of other.
  bool subset_of(const SidedInterval& other) const;

  bool disjoint_from(const SidedInterval& other) const { return !intersect(other); }

  /// Open interior; nullopt for a single point.
  std::optional<SidedInterval> interior() const {
    if (is_point()) return std::nullopt;
    return SidedInterval{lo, hi, false, false};
  }

  SidedInterval closure() const { return {lo, hi, true, true}; }

  bool operator==(const SidedInterval& other) const = default;

  std::string str() const;
};

using IntervalList = std::vector<SidedInterval>;

/// Sorts by lo and merges components whose union is itself an interval
/// (overlap, or exact abutment where at least one side includes the shared
/// point).  The result is the minimal disjoint representation of the union.
IntervalList normalize_union(IntervalList parts);

/// Union of all components contains x.
bool list_contains(const IntervalList& parts, const Rational& x);

/// Flag-aware: inner is a subset of the union of the (normalized) list.
bool subset_of_list(const SidedInterval& inner, const IntervalList& outer);

bool lists_disjoint(const IntervalList& a, const IntervalList& b);

Rational total_length(const IntervalList& parts);

/// Set difference ([0,1)-style universe): universe minus the normalized union
/// of `parts`, as a disjoint flag-aware list.
IntervalList list_complement(const SidedInterval& universe, IntervalList parts);

/// Open interiors of all non-point components.
IntervalList list_interior(const IntervalList& parts);

}  // namespace pwc
