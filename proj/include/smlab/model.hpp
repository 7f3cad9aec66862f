// Core domain types for a balanced two-sided matching market: explicit
// preference profiles, truncated reports, matchings, rank statistics and a
// brute-force enumerator of stable matchings for tiny markets.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace smlab {

using Index = std::uint32_t;

enum class Side { Man, Woman };

struct AgentId {
  Side side;
  Index index;
};

/// Full strict rankings for n men and n women. Lists hold partner indices in
/// decreasing preference; inverse tables give O(1) rank lookups.
class PreferenceProfile {
 public:
  /// Validates that every list is a permutation of [0, n).
  /// Throws std::invalid_argument otherwise.
  static PreferenceProfile from_lists(const std::vector<std::vector<Index>>& men_prefs,
                                      const std::vector<std::vector<Index>>& women_prefs);

  Index size() const noexcept { return n_; }

  std::span<const Index> man_list(Index m) const noexcept {
    return {men_.data() + std::size_t{m} * n_, n_};
  }
  std::span<const Index> woman_list(Index w) const noexcept {
    return {women_.data() + std::size_t{w} * n_, n_};
  }

  // 1-based ranks, unchecked.
  Index man_rank(Index m, Index w) const noexcept { return men_pos_[std::size_t{m} * n_ + w] + 1; }
  Index woman_rank(Index w, Index m) const noexcept {
    return women_pos_[std::size_t{w} * n_ + m] + 1;
  }

  /// Rank (1 = best) of `partner` in `agent`'s list. Throws std::out_of_range
  /// for an out-of-range agent or partner.
  Index rank_of(AgentId agent, Index partner) const;

  std::vector<std::vector<Index>> men_prefs() const;
  std::vector<std::vector<Index>> women_prefs() const;

  friend bool operator==(const PreferenceProfile& a, const PreferenceProfile& b) {
    return a.n_ == b.n_ && a.men_ == b.men_ && a.women_ == b.women_;
  }

 private:
  friend PreferenceProfile generate_profile(Index n, std::uint64_t seed);

  explicit PreferenceProfile(Index n);
  void build_inverse();

  Index n_ = 0;
  std::vector<Index> men_;
  std::vector<Index> women_;
  std::vector<Index> men_pos_;
  std::vector<Index> women_pos_;
};

/// Independent uniform permutations for all 2n lists, deterministic in (n, seed).
PreferenceProfile generate_profile(Index n, std::uint64_t seed);

/// A profile plus a per-woman acceptable-prefix length. Holds a reference to
/// the base profile, which must outlive the report.
class ReportedProfile {
 public:
  explicit ReportedProfile(const PreferenceProfile& base);
  ReportedProfile(const PreferenceProfile& base, std::vector<Index> acceptable_len);

  const PreferenceProfile& base() const noexcept { return *base_; }
  Index size() const noexcept { return base_->size(); }
  Index acceptable_len(Index w) const noexcept { return len_[w]; }
  bool acceptable(Index w, Index m) const noexcept { return base_->woman_rank(w, m) <= len_[w]; }
  bool is_truthful() const noexcept;

  /// Copy of this report with woman `w`'s list cut to `len` entries.
  ReportedProfile with_truncation(Index w, Index len) const;

 private:
  const PreferenceProfile* base_;
  std::vector<Index> len_;
};

inline constexpr Index kNone = std::numeric_limits<Index>::max();

class Matching {
 public:
  explicit Matching(Index n = 0) : wife_(n, kNone), husband_(n, kNone) {}

  Index size() const noexcept { return static_cast<Index>(wife_.size()); }

  std::optional<Index> wife_of(Index m) const noexcept {
    return wife_[m] == kNone ? std::nullopt : std::optional<Index>(wife_[m]);
  }
  std::optional<Index> husband_of(Index w) const noexcept {
    return husband_[w] == kNone ? std::nullopt : std::optional<Index>(husband_[w]);
  }

  /// Pairs m and w, detaching whoever either of them was with before.
  void pair(Index m, Index w);
  void unpair_man(Index m);

  std::size_t matched_count() const noexcept;
  bool is_perfect() const noexcept { return matched_count() == wife_.size(); }

  /// Checks wife_of[m] = w <=> husband_of[w] = m.
  bool is_consistent() const noexcept;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<Index> wife_;
  std::vector<Index> husband_;
};

using BlockingPair = std::pair<Index, Index>;  // (man, woman)

/// All pairs not matched together who strictly prefer each other to their
/// current situation (being unmatched is worst). O(n^2).
std::vector<BlockingPair> find_blocking_pairs(const PreferenceProfile& profile,
                                              const Matching& matching);

/// Same, but a woman only counts men within her reported prefix as acceptable.
std::vector<BlockingPair> find_blocking_pairs(const ReportedProfile& reported,
                                              const Matching& matching);

struct RankReport {
  std::vector<std::optional<Index>> man_rank;
  std::vector<std::optional<Index>> woman_rank;
  // Means over matched agents; NaN when nobody on that side is matched.
  double avg_men_rank = 0.0;
  double avg_women_rank = 0.0;

  /// Fraction of all women whose rank is at most k. Unmatched women never count.
  double top_k_fraction(Index k) const noexcept;
};

/// Builds a report from per-agent ranks, filling in the averages.
RankReport make_rank_report(std::vector<std::optional<Index>> man_rank,
                            std::vector<std::optional<Index>> woman_rank);

/// Ranks under the true preferences of `profile`.
RankReport rank_stats(const PreferenceProfile& profile, const Matching& matching);

inline constexpr Index kMaxEnumerationSize = 9;

struct StableSet {
  std::vector<Matching> matchings;
  // Per woman, by her own preference.
  std::vector<Index> best_partner;
  std::vector<Index> worst_partner;
  std::vector<std::size_t> stable_husband_count;
};

/// Exhaustive search over all n! perfect matchings. Throws std::invalid_argument
/// when n exceeds kMaxEnumerationSize.
StableSet enumerate_stable_matchings(const PreferenceProfile& profile);

}  // namespace smlab
