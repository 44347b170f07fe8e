#include "pwc/fuzz.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace pwc {

namespace {

PiecewiseAffineContraction generate(std::size_t n, std::uint64_t seed, bool increasing_only) {
  if (n < 1 || n > 60)
    throw PwcError(Errc::precondition_failed, "piece count out of the generator's range");
  std::mt19937_64 rng((seed + 1) * 0x9E3779B97F4A7C15ull ^ (n * 0xBF58476D1CE4E5B9ull));
  std::uniform_int_distribution<long> tick(1, 63);
  std::uniform_int_distribution<long> magnitude(8, 56);
  std::uniform_int_distribution<long> gap_weight(1, 16);
  std::bernoulli_distribution coin;

  for (int attempt = 0; attempt < 32; ++attempt) {
    // breakpoints 0 = x_0 < x_1 < ... < x_n = 1 on the 1/64 grid
    std::set<long> ticks;
    while (ticks.size() < n - 1) ticks.insert(tick(rng));
    std::vector<Rational> xs{0};
    for (long t : ticks) xs.push_back(Rational(t, 64));
    xs.push_back(1);

    // randomized ownership of the interior breakpoints
    std::vector<bool> lo_closed(n), hi_closed(n);
    lo_closed[0] = true;
    hi_closed[n - 1] = false;
    for (std::size_t i = 1; i < n; ++i) {
      bool right_owns = coin(rng);
      lo_closed[i] = right_owns;
      hi_closed[i - 1] = !right_owns;
    }

    if (increasing_only) {
      for (std::size_t i = 0; i < n; ++i) {
        lo_closed[i] = true;
        if (i) hi_closed[i - 1] = false;
      }
    }

    std::vector<Rational> slopes(n);
    for (auto& s : slopes)
      s = Rational(increasing_only || coin(rng) ? magnitude(rng) : -magnitude(rng), 64);

    // pack the images in random order with strictly positive gaps
    Rational total = 0;
    for (std::size_t i = 0; i < n; ++i) total += (xs[i + 1] - xs[i]) * rational_abs(slopes[i]);
    Rational slack = 1 - total;  // > 0 since every |slope| <= 7/8
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Rational> weights(n + 1);
    Rational weight_sum = 0;
    for (auto& w : weights) {
      w = gap_weight(rng);
      weight_sum += w;
    }

    std::vector<AffinePiece> pieces(
        n, AffinePiece{0, 0, SidedInterval::half_open(0, 1)});
    Rational pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t i = order[j];
      pos += slack * weights[j] / weight_sum;
      const Rational& s = slopes[i];
      // anchor so the image's left end sits at pos
      Rational intercept = s > 0 ? pos - s * xs[i] : pos - s * xs[i + 1];
      pieces[i] = {s, std::move(intercept), {xs[i], xs[i + 1], lo_closed[i], hi_closed[i]}};
      pos += (xs[i + 1] - xs[i]) * rational_abs(s);
    }

    PiecewiseAffineContraction candidate(std::move(pieces));
    if (candidate.validate().ok()) return candidate;
  }
  throw PwcError(Errc::generation_failed, "no valid map within the retry bound");
}

}  // namespace

PiecewiseAffineContraction fuzz_generate(std::size_t n, std::uint64_t seed) {
  return generate(n, seed, false);
}

PiecewiseAffineContraction fuzz_generate_increasing(std::size_t n, std::uint64_t seed) {
  return generate(n, seed, true);
}

}  // namespace pwc
