#include "pwc/interval.hpp"

#include <algorithm>

namespace pwc {

std::optional<SidedInterval> SidedInterval::intersect(const SidedInterval& other) const {
  Rational a;
  bool ac;
  if (lo > other.lo) {
    a = lo;
    ac = lo_closed;
  } else if (other.lo > lo) {
    a = other.lo;
    ac = other.lo_closed;
  } else {
    a = lo;
    ac = lo_closed && other.lo_closed;
  }
  Rational b;
  bool bc;
  if (hi < other.hi) {
    b = hi;
    bc = hi_closed;
  } else if (other.hi < hi) {
    b = other.hi;
    bc = other.hi_closed;
  } else {
    b = hi;
    bc = hi_closed && other.hi_closed;
  }
  if (a > b) return std::nullopt;
  if (a == b && !(ac && bc)) return std::nullopt;
  return SidedInterval{std::move(a), std::move(b), ac, bc};
}

bool SidedInterval::subset_of(const SidedInterval& other) const {
  bool lo_ok = lo > other.lo || (lo == other.lo && (other.lo_closed || !lo_closed));
  bool hi_ok = hi < other.hi || (hi == other.hi && (other.hi_closed || !hi_closed));
  return lo_ok && hi_ok;
}

std::string SidedInterval::str() const {
  if (is_point()) return "{" + to_fraction_string(lo) + "}";
  return std::string(lo_closed ? "[" : "(") + to_fraction_string(lo) + ", " +
         to_fraction_string(hi) + (hi_closed ? "]" : ")");
}

namespace {

bool can_merge(const SidedInterval& a, const SidedInterval& b) {
  // precondition: a.lo <= b.lo (sorted)
  if (b.lo < a.hi) return true;
  if (b.lo == a.hi) return a.hi_closed || b.lo_closed;
  return false;
}

SidedInterval merged(const SidedInterval& a, const SidedInterval& b) {
  Rational hi;
  bool hc;
  if (a.hi > b.hi) {
    hi = a.hi;
    hc = a.hi_closed;
  } else if (b.hi > a.hi) {
    hi = b.hi;
    hc = b.hi_closed;
  } else {
    hi = a.hi;
    hc = a.hi_closed || b.hi_closed;
  }
  bool lc = a.lo == b.lo ? (a.lo_closed || b.lo_closed) : a.lo_closed;
  return {a.lo, std::move(hi), lc, hc};
}

}  // namespace

IntervalList normalize_union(IntervalList parts) {
  if (parts.empty()) return parts;
  std::sort(parts.begin(), parts.end(), [](const SidedInterval& a, const SidedInterval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    if (a.lo_closed != b.lo_closed) return a.lo_closed;
    return a.hi < b.hi;
  });
  IntervalList out;
  out.push_back(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (can_merge(out.back(), parts[i]))
      out.back() = merged(out.back(), parts[i]);
    else
      out.push_back(parts[i]);
  }
  return out;
}

bool list_contains(const IntervalList& parts, const Rational& x) {
  for (const auto& p : parts)
    if (p.contains(x)) return true;
  return false;
}

bool subset_of_list(const SidedInterval& inner, const IntervalList& outer) {
  for (const auto& p : normalize_union(outer))
    if (inner.subset_of(p)) return true;
  return false;
}

bool lists_disjoint(const IntervalList& a, const IntervalList& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (!x.disjoint_from(y)) return false;
  return true;
}

Rational total_length(const IntervalList& parts) {
  Rational sum = 0;
  for (const auto& p : parts) sum += p.length();
  return sum;
}

IntervalList list_complement(const SidedInterval& universe, IntervalList parts) {
  IntervalList clipped;
  for (const auto& p : parts)
    if (auto c = p.intersect(universe)) clipped.push_back(*c);
  clipped = normalize_union(std::move(clipped));

  IntervalList out;
  Rational cur = universe.lo;
  bool cur_closed = universe.lo_closed;
  auto emit = [&out](Rational a, Rational b, bool ac, bool bc) {
    if (a < b || (a == b && ac && bc)) out.emplace_back(std::move(a), std::move(b), ac, bc);
  };
  for (const auto& p : clipped) {
    emit(cur, p.lo, cur_closed, !p.lo_closed);
    cur = p.hi;
    cur_closed = !p.hi_closed;
  }
  emit(std::move(cur), universe.hi, cur_closed, universe.hi_closed);
  return out;
}

IntervalList list_interior(const IntervalList& parts) {
  IntervalList out;
  for (const auto& p : normalize_union(parts))
    if (auto i = p.interior()) out.push_back(*i);
  return out;
}

}  // namespace pwc
