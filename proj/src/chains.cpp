#include "pwc/chains.hpp"

#include <algorithm>

namespace pwc {

namespace {

bool pair_condition(const IndexPair& cur, int prev_a) {
  return cur.first == prev_a || cur.second == prev_a;
}

}  // namespace

bool is_chain(const std::vector<IndexPair>& pairs) {
  if (pairs.empty()) throw PwcError(Errc::empty_chain, "a chain has at least one pair");
  for (const auto& [a, b] : pairs)
    if (a <= 0 || b <= 0)
      throw PwcError(Errc::precondition_failed, "chain entries must be positive");
  const std::size_t s = pairs.size();
  for (std::size_t l = 1; l <= s; ++l)
    if (!pair_condition(pairs[l % s], pairs[l - 1].first)) return false;
  return true;
}

std::set<int> coordinate_set(const Chain& chain) {
  std::set<int> S;
  for (const auto& [a, b] : chain.pairs) {
    S.insert(a);
    S.insert(b);
  }
  return S;
}

bool is_extremal_family(const Chain& chain) {
  const auto& pairs = chain.pairs;
  std::set<int> distinct{pairs.front().first};
  for (const auto& [a, b] : pairs) {
    if (a != pairs.front().first) return false;
    if (!distinct.insert(b).second) return false;
  }
  return true;
}

LemmaVerification verify_lemma(std::size_t s_max, std::size_t alphabet_max, std::size_t budget) {
  if (s_max < 1 || alphabet_max < 1)
    throw PwcError(Errc::precondition_failed, "need s_max >= 1 and alphabet_max >= 1");
  LemmaVerification report;
  report.s_max = s_max;
  report.alphabet_max = alphabet_max;
  report.bound_ok = true;
  report.equality_matches = true;

  const int A = static_cast<int>(alphabet_max);
  std::vector<IndexPair> stack;
  // Depth-first enumeration pruned by the forward chain condition; the wrap
  // condition on the first pair is checked when a full length is reached.
  auto visit = [&](auto&& self, std::size_t s) -> void {
    if (stack.size() == s) {
      if (!pair_condition(stack.front(), stack.back().first)) return;
      if (++report.chains_checked > budget)
        throw PwcError(Errc::budget_exceeded, "chain enumeration budget exhausted");
      Chain chain{stack};
      std::size_t count = coordinate_set(chain).size();
      report.max_coordinates = std::max(report.max_coordinates, count);
      if (count > s + 1) report.bound_ok = false;
      bool equality = count == s + 1;
      if (equality) ++report.equality_cases;
      if (equality != is_extremal_family(chain)) report.equality_matches = false;
      return;
    }
    if (stack.empty()) {
      for (int a = 1; a <= A; ++a)
        for (int b = 1; b <= A; ++b) {
          stack.push_back({a, b});
          self(self, s);
          stack.pop_back();
        }
      return;
    }
    const int prev_a = stack.back().first;
    for (int a = 1; a <= A; ++a)
      for (int b = 1; b <= A; ++b) {
        if (a != prev_a && b != prev_a) continue;
        stack.push_back({a, b});
        self(self, s);
        stack.pop_back();
      }
  };
  for (std::size_t s = 1; s <= s_max; ++s) visit(visit, s);
  return report;
}

}  // namespace pwc
