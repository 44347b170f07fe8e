#pragma once

#include "pwc/census.hpp"
#include "pwc/gapflow.hpp"
#include "pwc/map.hpp"

#include <cstddef>
#include <vector>

namespace pwc {

/// Certified rational enclosure [lo, hi] of a real value; the only place in
/// the library where a value is not a single exact rational.
struct Enclosure {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool inside(const Enclosure& outer) const { return outer.lo <= lo && hi <= outer.hi; }
};

/// The probability measure assigning mass 1/(2^(l+1) r) to the l-th layer of
/// each of the r gap intervals, uniformly spread within the layer.
struct NuMeasure {
  GapAtlas atlas;  // must be propagated

  std::size_t r() const { return atlas.F.size(); }
};

NuMeasure make_nu(GapAtlas atlas);

/// Enclosure of nu(J): exact sum over layers up to `depth` plus the 2^-(depth+1)
/// tail bound; exact (zero-width) when the layers up to `depth` cover J fully.
Enclosure nu_of_interval(const NuMeasure& measure, const SidedInterval& J);

/// The conjugating homeomorphism h(x) = nu((0, x)) as enclosure queries.
struct ConjugacyTable {
  NuMeasure measure;
  std::size_t depth = 0;
  std::vector<Enclosure> breakpoint_images;  // h(x_i) for interior breakpoints
};

ConjugacyTable build_conjugacy_table(const PiecewiseAffineContraction& map, std::size_t depth);

Enclosure h_value(const ConjugacyTable& table, const Rational& x);

/// Enclosure of h^-1(y) of width <= tol by certified monotone bisection;
/// throws ResolutionExceeded when the table depth cannot separate y.
Enclosure h_inverse(const ConjugacyTable& table, const Rational& y, const Rational& tol);

struct SlopeSample {
  Rational x_lo, x_hi;      // sample pair inside the piece
  Enclosure quotient;       // difference quotient of h∘f∘h⁻¹ between h-images
};

struct PieceSlopeReport {
  int piece = 0;                  // 1-based
  Rational expected;              // +1/2 or -1/2
  std::vector<SlopeSample> samples;
  Rational max_deviation = 0;     // worst distance of a quotient bound from expected
  bool ok = false;
};

struct SlopeReport {
  std::vector<PieceSlopeReport> pieces;
  bool all_ok = false;
};

/// Checks that the conjugated map has slope +1/2 on increasing pieces and
/// -1/2 on decreasing ones, within tol, using enclosure arithmetic on
/// difference quotients of h across f.
SlopeReport verify_half_slopes(const PiecewiseAffineContraction& map, const ConjugacyTable& table,
                               std::size_t samples_per_piece, const Rational& tol);

/// Approximate normal form with slopes hard-set to +-1/2 and breakpoints at
/// enclosure midpoints.  Explicitly approximate: it is NOT claimed to
/// validate, only to visualize the normalized map.
struct SnappedNormalForm {
  std::vector<AffinePiece> pieces;
  bool approximate = true;
};

SnappedNormalForm snap_normal_form(const PiecewiseAffineContraction& map,
                                   const ConjugacyTable& table);

}  // namespace pwc
