#pragma once

#include <vector>

#include "oracles.hpp"
#include "smlab/model.hpp"
#include "smlab/rng.hpp"

namespace fixture {

// m1: w1 > w2, m2: w2 > w1; w1: m2 > m1, w2: m1 > m2 (zero-based indices).
inline smlab::PreferenceProfile two_by_two() {
  return smlab::PreferenceProfile::from_lists({{0, 1}, {1, 0}}, {{1, 0}, {0, 1}});
}

inline smlab::Matching matching_of(const std::vector<smlab::Index>& wife) {
  smlab::Matching m(static_cast<smlab::Index>(wife.size()));
  for (smlab::Index i = 0; i < wife.size(); ++i) m.pair(i, wife[i]);
  return m;
}

inline oracle::Wives wives_of(const smlab::Matching& m) {
  oracle::Wives out(m.size(), -1);
  for (smlab::Index i = 0; i < m.size(); ++i) {
    if (auto w = m.wife_of(i)) out[i] = static_cast<int>(*w);
  }
  return out;
}

// Profile size in [lo, hi] picked from the seed.
inline smlab::Index size_for(std::uint64_t seed, smlab::Index lo, smlab::Index hi) {
  smlab::Rng rng(smlab::derive_seed({seed, 0x517e}));
  return lo + static_cast<smlab::Index>(rng.below(hi - lo + 1));
}

}  // namespace fixture
