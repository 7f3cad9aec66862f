#include "smlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "smlab/rng.hpp"

namespace smlab {

namespace {

void append_validated(std::vector<Index>& flat, const std::vector<Index>& list, Index n,
                      const char* side) {
  if (list.size() != n) {
    throw std::invalid_argument(std::string(side) + " preference list has length " +
                                std::to_string(list.size()) + ", expected " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (Index x : list) {
    if (x >= n || seen[x]) {
      throw std::invalid_argument(std::string(side) + " preference list is not a permutation");
    }
    seen[x] = true;
  }
  flat.insert(flat.end(), list.begin(), list.end());
}

}  // namespace

PreferenceProfile::PreferenceProfile(Index n) : n_(n) {
  const std::size_t cells = std::size_t{n} * n;
  men_.reserve(cells);
  women_.reserve(cells);
}

void PreferenceProfile::build_inverse() {
  const std::size_t cells = std::size_t{n_} * n_;
  men_pos_.assign(cells, 0);
  women_pos_.assign(cells, 0);
  for (std::size_t a = 0; a < n_; ++a) {
    const std::size_t row = a * n_;
    for (Index r = 0; r < n_; ++r) {
      men_pos_[row + men_[row + r]] = r;
      women_pos_[row + women_[row + r]] = r;
    }
  }
}

PreferenceProfile PreferenceProfile::from_lists(const std::vector<std::vector<Index>>& men_prefs,
                                                const std::vector<std::vector<Index>>& women_prefs) {
  const auto n = static_cast<Index>(men_prefs.size());
  if (n == 0) throw std::invalid_argument("market size must be at least 1");
  if (women_prefs.size() != n) throw std::invalid_argument("men and women counts differ");
  PreferenceProfile p(n);
  for (const auto& l : men_prefs) append_validated(p.men_, l, n, "man");
  for (const auto& l : women_prefs) append_validated(p.women_, l, n, "woman");
  p.build_inverse();
  return p;
}

Index PreferenceProfile::rank_of(AgentId agent, Index partner) const {
  if (agent.index >= n_) throw std::out_of_range("agent index out of range");
  if (partner >= n_) throw std::out_of_range("partner index out of range");
  return agent.side == Side::Man ? man_rank(agent.index, partner)
                                 : woman_rank(agent.index, partner);
}

std::vector<std::vector<Index>> PreferenceProfile::men_prefs() const {
  std::vector<std::vector<Index>> out;
  out.reserve(n_);
  for (Index m = 0; m < n_; ++m) out.emplace_back(man_list(m).begin(), man_list(m).end());
  return out;
}

std::vector<std::vector<Index>> PreferenceProfile::women_prefs() const {
  std::vector<std::vector<Index>> out;
  out.reserve(n_);
  for (Index w = 0; w < n_; ++w) out.emplace_back(woman_list(w).begin(), woman_list(w).end());
  return out;
}

PreferenceProfile generate_profile(Index n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("market size must be at least 1");
  PreferenceProfile p(n);
  Rng rng(seed);
  std::vector<Index> identity(n);
  std::iota(identity.begin(), identity.end(), Index{0});
  p.men_.resize(std::size_t{n} * n);
  p.women_.resize(std::size_t{n} * n);
  for (auto* flat : {&p.men_, &p.women_}) {
    for (Index a = 0; a < n; ++a) {
      std::span<Index> row(flat->data() + std::size_t{a} * n, n);
      std::copy(identity.begin(), identity.end(), row.begin());
      shuffle(row, rng);
    }
  }
  p.build_inverse();
  return p;
}

ReportedProfile::ReportedProfile(const PreferenceProfile& base)
    : base_(&base), len_(base.size(), base.size()) {}

ReportedProfile::ReportedProfile(const PreferenceProfile& base, std::vector<Index> acceptable_len)
    : base_(&base), len_(std::move(acceptable_len)) {
  if (len_.size() != base.size()) throw std::invalid_argument("one cutoff per woman required");
  for (Index l : len_) {
    if (l > base.size()) throw std::invalid_argument("cutoff exceeds market size");
  }
}

bool ReportedProfile::is_truthful() const noexcept {
  return std::all_of(len_.begin(), len_.end(), [&](Index l) { return l == base_->size(); });
}

ReportedProfile ReportedProfile::with_truncation(Index w, Index len) const {
  if (w >= size()) throw std::out_of_range("woman index out of range");
  if (len > size()) throw std::invalid_argument("cutoff exceeds market size");
  ReportedProfile out = *this;
  out.len_[w] = len;
  return out;
}

void Matching::pair(Index m, Index w) {
  if (wife_[m] != kNone) husband_[wife_[m]] = kNone;
  if (husband_[w] != kNone) wife_[husband_[w]] = kNone;
  wife_[m] = w;
  husband_[w] = m;
}

void Matching::unpair_man(Index m) {
  if (wife_[m] == kNone) return;
  husband_[wife_[m]] = kNone;
  wife_[m] = kNone;
}

std::size_t Matching::matched_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(wife_.begin(), wife_.end(), [](Index w) { return w != kNone; }));
}

bool Matching::is_consistent() const noexcept {
  if (wife_.size() != husband_.size()) return false;
  const auto n = static_cast<Index>(wife_.size());
  for (Index m = 0; m < n; ++m) {
    if (wife_[m] != kNone && (wife_[m] >= n || husband_[wife_[m]] != m)) return false;
  }
  for (Index w = 0; w < n; ++w) {
    if (husband_[w] != kNone && (husband_[w] >= n || wife_[husband_[w]] != w)) return false;
  }
  return true;
}

namespace {

template <typename Acceptable>
std::vector<BlockingPair> blocking_pairs_impl(const PreferenceProfile& p, const Matching& mt,
                                              Acceptable acceptable) {
  const Index n = p.size();
  std::vector<BlockingPair> out;
  // Rank of current partner, n + 1 when single.
  std::vector<Index> man_cur(n), woman_cur(n);
  for (Index m = 0; m < n; ++m) {
    const auto w = mt.wife_of(m);
    man_cur[m] = w ? p.man_rank(m, *w) : n + 1;
  }
  for (Index w = 0; w < n; ++w) {
    const auto m = mt.husband_of(w);
    woman_cur[w] = m ? p.woman_rank(w, *m) : n + 1;
  }
  for (Index m = 0; m < n; ++m) {
    const auto list = p.man_list(m);
    // Only women above his current wife can block with him.
    for (Index r = 0; r + 1 < man_cur[m]; ++r) {
      const Index w = list[r];
      if (acceptable(w, m) && p.woman_rank(w, m) < woman_cur[w]) out.emplace_back(m, w);
    }
  }
  return out;
}

}  // namespace

std::vector<BlockingPair> find_blocking_pairs(const PreferenceProfile& profile,
                                              const Matching& matching) {
  return blocking_pairs_impl(profile, matching, [](Index, Index) { return true; });
}

std::vector<BlockingPair> find_blocking_pairs(const ReportedProfile& reported,
                                              const Matching& matching) {
  return blocking_pairs_impl(reported.base(), matching,
                             [&](Index w, Index m) { return reported.acceptable(w, m); });
}

double RankReport::top_k_fraction(Index k) const noexcept {
  if (woman_rank.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& r : woman_rank) hits += (r && *r <= k) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(woman_rank.size());
}

namespace {

double mean_of_matched(const std::vector<std::optional<Index>>& ranks) {
  std::uint64_t sum = 0;
  std::size_t count = 0;
  for (const auto& r : ranks) {
    if (!r) continue;
    sum += *r;
    ++count;
  }
  return count == 0 ? std::nan("") : static_cast<double>(sum) / static_cast<double>(count);
}

}  // namespace

RankReport make_rank_report(std::vector<std::optional<Index>> man_rank,
                            std::vector<std::optional<Index>> woman_rank) {
  RankReport r;
  r.avg_men_rank = mean_of_matched(man_rank);
  r.avg_women_rank = mean_of_matched(woman_rank);
  r.man_rank = std::move(man_rank);
  r.woman_rank = std::move(woman_rank);
  return r;
}

RankReport rank_stats(const PreferenceProfile& profile, const Matching& matching) {
  const Index n = profile.size();
  std::vector<std::optional<Index>> men(n), women(n);
  for (Index m = 0; m < n; ++m) {
    if (auto w = matching.wife_of(m)) {
      men[m] = profile.man_rank(m, *w);
      women[*w] = profile.woman_rank(*w, m);
    }
  }
  return make_rank_report(std::move(men), std::move(women));
}

StableSet enumerate_stable_matchings(const PreferenceProfile& profile) {
  const Index n = profile.size();
  if (n > kMaxEnumerationSize) {
    throw std::invalid_argument("stable-matching enumeration is limited to n <= " +
                                std::to_string(kMaxEnumerationSize));
  }
  StableSet set;
  set.best_partner.assign(n, kNone);
  set.worst_partner.assign(n, kNone);
  set.stable_husband_count.assign(n, 0);
  std::vector<std::vector<bool>> is_stable_husband(n, std::vector<bool>(n, false));

  std::vector<Index> wife(n);
  std::iota(wife.begin(), wife.end(), Index{0});
  std::vector<Index> husband(n);
  do {
    for (Index m = 0; m < n; ++m) husband[wife[m]] = m;
    bool stable = true;
    for (Index m = 0; m < n && stable; ++m) {
      const auto list = profile.man_list(m);
      for (Index r = 0; list[r] != wife[m]; ++r) {
        const Index w = list[r];
        if (profile.woman_rank(w, m) < profile.woman_rank(w, husband[w])) {
          stable = false;
          break;
        }
      }
    }
    if (!stable) continue;
    Matching mt(n);
    for (Index m = 0; m < n; ++m) mt.pair(m, wife[m]);
    set.matchings.push_back(std::move(mt));
    for (Index w = 0; w < n; ++w) {
      const Index m = husband[w];
      if (!is_stable_husband[w][m]) {
        is_stable_husband[w][m] = true;
        ++set.stable_husband_count[w];
      }
      if (set.best_partner[w] == kNone ||
          profile.woman_rank(w, m) < profile.woman_rank(w, set.best_partner[w])) {
        set.best_partner[w] = m;
      }
      if (set.worst_partner[w] == kNone ||
          profile.woman_rank(w, m) > profile.woman_rank(w, set.worst_partner[w])) {
        set.worst_partner[w] = m;
      }
    }
  } while (std::next_permutation(wife.begin(), wife.end()));
  return set;
}

}  // namespace smlab
