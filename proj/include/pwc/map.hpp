#pragma once

#include "pwc/errors.hpp"
#include "pwc/interval.hpp"
#include "pwc/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pwc {

/// One affine branch of the map: x -> slope*x + intercept on `domain`.
/// 0 < |slope| < 1 so every branch is an injective contraction.
struct AffinePiece {
  Rational slope;
  Rational intercept;
  SidedInterval domain;

  Rational apply(const Rational& x) const { return slope * x + intercept; }
  SidedInterval image() const { return domain.affine_image(slope, intercept); }
};

enum class Violation {
  not_partition,
  not_injective,
  non_contractive,
  zero_slope,
  image_escapes,
};

std::string violation_name(Violation v);

struct ValidationReport {
  std::vector<std::pair<Violation, std::string>> violations;
  Rational kappa = 0;  // max |slope|, set when ok()

  bool ok() const { return violations.empty(); }
};

/// Itinerary: 1-based piece indices visited by an orbit.
using ItineraryWord = std::vector<int>;

/// Maximal interval on which f^k is a single affine composition.
struct Cylinder {
  SidedInterval support;
  ItineraryWord word;
  Rational composed_slope;
  Rational composed_intercept;

  Rational apply(const Rational& x) const { return composed_slope * x + composed_intercept; }
  std::size_t depth() const { return word.size(); }
};

/// An injective piecewise affine contraction of [0,1): n affine branches on a
/// side-flagged partition.  Immutable after construction; all operations on a
/// validated map are pure.
class PiecewiseAffineContraction {
 public:
  explicit PiecewiseAffineContraction(std::vector<AffinePiece> pieces);

  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  std::size_t piece_count() const { return pieces_.size(); }

  /// x_0 = 0, ..., x_n = 1 (derived from the sorted domains).
  const std::vector<Rational>& breakpoints() const { return breakpoints_; }

  /// Interior breakpoints x_1..x_{n-1}.
  std::vector<Rational> interior_breakpoints() const;

  ValidationReport validate() const;
  Rational kappa() const;

  /// 1-based index of the unique piece whose domain contains x.
  int piece_index(const Rational& x) const;

  Rational evaluate(const Rational& x) const;

  /// Exact image f(J) as a minimal disjoint component list; singleton list
  /// iff f(J) is an interval.  Components abutting exactly are merged.
  IntervalList image_interval(const SidedInterval& J) const;

  /// The unique x with f(x) = y, or nullopt if y is outside the image.
  std::optional<Rational> preimage_point(const Rational& y) const;

  /// [x, f(x), ..., f^steps(x)].
  std::vector<Rational> orbit(const Rational& x, std::size_t steps,
                              std::size_t bit_budget = 0) const;

  ItineraryWord itinerary(const Rational& x, std::size_t length) const;

  /// Side-flagged partition of [0,1) into maximal domains of affinity of f^k.
  std::vector<Cylinder> cylinders(std::size_t k) const;

  /// Image of the whole domain, as a disjoint component list.
  IntervalList range() const;

 private:
  void require_in_domain(const Rational& x) const;

  std::vector<AffinePiece> pieces_;
  std::vector<Rational> breakpoints_;
};

/// Piecewise polynomial observable for Birkhoff averages; evaluable exactly
/// at rationals.  Each piece holds coefficients c0 + c1 x + c2 x^2 + ...
struct PiecewisePolynomial {
  struct Piece {
    SidedInterval domain;
    std::vector<Rational> coefficients;
  };
  std::vector<Piece> pieces;

  static PiecewisePolynomial identity();
  Rational evaluate(const Rational& x) const;
};

/// (1/k) * sum_{i<k} phi(f^i(x)).
Rational birkhoff_average(const PiecewiseAffineContraction& map, const PiecewisePolynomial& phi,
                          const Rational& x, std::size_t k);

/// Limit of the time average when the orbit's omega-limit is certified to be
/// a periodic cycle: the average of phi over that cycle.  Returns nullopt
/// when no certificate is found within `max_steps`.
std::optional<Rational> birkhoff_limit(const PiecewiseAffineContraction& map,
                                       const PiecewisePolynomial& phi, const Rational& x,
                                       std::size_t max_steps = 512);

}  // namespace pwc
