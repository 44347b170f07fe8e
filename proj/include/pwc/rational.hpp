#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pwc {

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.  Every coordinate, slope and intercept in the library is one
/// of these; there is no rounding anywhere outside the conjugacy enclosures.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(num, den);
}

inline Integer numerator(const Rational& q) {
  return boost::multiprecision::numerator(q);
}
inline Integer denominator(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Total bit size of numerator plus denominator; the budget unit for
/// ArithmeticBudgetExceeded checks on iterated orbits and chains.
inline std::size_t bit_size(const Rational& q) {
  return msb(abs(numerator(q)) + 1) + msb(denominator(q)) + 2;
}

/// Parses "p/q" or "p" (with optional sign).  Returns nullopt on malformed
/// input so the JSON layer can attach file/field locations to the error.
std::optional<Rational> parse_rational(const std::string& text);

/// Serializes as "p/q" with q always present ("3/7", "-1/2", "0/1").
std::string to_fraction_string(const Rational& q);

/// q^k for k >= 0.
Rational rational_pow(const Rational& q, unsigned long k);

}  // namespace pwc
