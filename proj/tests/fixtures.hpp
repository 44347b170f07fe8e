#pragma once

#include "pwc/map.hpp"

namespace fixtures {

using pwc::PiecewiseAffineContraction;
using pwc::Rational;
using pwc::SidedInterval;

inline Rational q(long n, long d = 1) { return Rational(n, d); }

/// Two branches around 1/2: a decreasing one and an increasing one; has a
/// fixed point at 3/7 and a 2-cycle {1/54, 16/27}.
inline PiecewiseAffineContraction two_branch() {
  return PiecewiseAffineContraction({
      {q(-2, 5), q(3, 5), SidedInterval::half_open(q(0), q(1, 2))},
      {q(1, 5), q(-1, 10), SidedInterval::half_open(q(1, 2), q(1))},
  });
}

/// Single branch x/2.
inline PiecewiseAffineContraction half() {
  return PiecewiseAffineContraction({
      {q(1, 2), q(0), SidedInterval::half_open(q(0), q(1))},
  });
}

/// Built so 3/4 is a fixed point sitting exactly on the breakpoint, with the
/// wrong side ownership for its germ: the canonical degenerate orbit.
inline PiecewiseAffineContraction degenerate_fixed() {
  return PiecewiseAffineContraction({
      {q(1, 2), q(0), SidedInterval::half_open(q(0), q(3, 4))},
      {q(-1, 2), q(9, 8), SidedInterval::half_open(q(3, 4), q(1))},
  });
}

/// Piecewise increasing with left-closed pieces; fixed points 1/4 and 7/8.
inline PiecewiseAffineContraction increasing() {
  return PiecewiseAffineContraction({
      {q(1, 2), q(1, 8), SidedInterval::half_open(q(0), q(1, 2))},
      {q(1, 2), q(7, 16), SidedInterval::half_open(q(1, 2), q(1))},
  });
}

}  // namespace fixtures
