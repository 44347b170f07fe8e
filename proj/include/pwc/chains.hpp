#pragma once

#include "pwc/errors.hpp"

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

namespace pwc {

using IndexPair = std::pair<int, int>;

/// A cyclic sequence of ordered pairs (a_l, b_l) of positive integers in which
/// every pair shares its predecessor's first coordinate: for each l in {1..s},
/// a_{l mod s} = a_{l-1} or b_{l mod s} = a_{l-1}.
struct Chain {
  std::vector<IndexPair> pairs;

  std::size_t s() const { return pairs.size(); }
};

/// True iff the cyclic pair condition holds for every l, including the wrap.
/// Throws EmptyChain for an empty sequence and rejects non-positive entries.
bool is_chain(const std::vector<IndexPair>& pairs);

/// The set of all coordinates appearing in the chain.
std::set<int> coordinate_set(const Chain& chain);

/// Whether the chain belongs to the family that attains the maximal
/// coordinate count: all first coordinates equal and a_0, b_0, ..., b_{s-1}
/// pairwise distinct.
bool is_extremal_family(const Chain& chain);

struct LemmaVerification {
  std::size_t s_max = 0;
  std::size_t alphabet_max = 0;
  std::size_t chains_checked = 0;
  std::size_t equality_cases = 0;
  std::size_t max_coordinates = 0;
  bool bound_ok = false;       // #S <= s + 1 for every enumerated chain
  bool equality_matches = false;  // #S == s + 1 exactly on the extremal family
};

/// Exhaustively enumerates every chain with s <= s_max over the alphabet
/// {1..alphabet_max} and checks the coordinate-count bound and its equality
/// characterization.  Throws BudgetExceeded if the enumeration would visit
/// more than `budget` chains.
LemmaVerification verify_lemma(std::size_t s_max, std::size_t alphabet_max,
                               std::size_t budget = 8'000'000);

}  // namespace pwc
