#include "pwc/rational.hpp"

#include <cctype>

namespace pwc {

std::optional<Rational> parse_rational(const std::string& text) {
  std::string body = text;
  if (!body.empty() && body[0] == '+') body.erase(0, 1);  // GMP rejects a leading '+'
  if (body.empty()) return std::nullopt;
  std::size_t pos = body[0] == '-' ? 1 : 0;
  if (pos == body.size() || !std::isdigit(static_cast<unsigned char>(body[pos])))
    return std::nullopt;
  std::size_t slash = body.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(Integer(body));
    }
    std::string num = body.substr(0, slash);
    std::string den = body.substr(slash + 1);
    if (den.empty() || den[0] == '+' || den[0] == '-') return std::nullopt;
    Integer d(den);
    if (d == 0) return std::nullopt;
    return Rational(Integer(num), d);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string to_fraction_string(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

Rational rational_pow(const Rational& q, unsigned long k) {
  Rational out = 1;
  Rational base = q;
  while (k > 0) {
    if (k & 1ul) out *= base;
    base *= base;
    k >>= 1;
  }
  return out;
}

}  // namespace pwc
