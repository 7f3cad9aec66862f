// Proposal accounting shared by the explicit and lazily realized markets.

#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "smlab/model.hpp"

namespace smlab {

/// Counts every proposal made during a run. A distinct proposal is the first
/// one from a man to a given woman; a redundant proposal is a repeat draw of a
/// woman who is already in his proposed set (lazy mode only).
///
/// Invariant: total = redundant + sum of distinct_to_woman.
class ProposalLedger {
 public:
  explicit ProposalLedger(Index n = 0);

  void record_distinct(Index man, Index woman);
  void record_redundant(Index man, Index woman);

  std::uint64_t total_proposals() const noexcept { return total_; }
  std::uint64_t redundant_proposals() const noexcept { return redundant_; }
  std::uint64_t distinct_proposals() const noexcept { return total_ - redundant_; }

  /// Distinct proposers woman w has received (k_w).
  Index distinct_to_woman(Index w) const noexcept { return distinct_to_woman_[w]; }
  /// All proposals woman w has received, redundant ones included.
  std::uint64_t proposals_to_woman(Index w) const noexcept { return all_to_woman_[w]; }
  /// Distinct women man m has proposed to (|A_m|).
  Index proposals_by_man(Index m) const noexcept { return by_man_[m]; }

  std::span<const Index> distinct_to_woman() const noexcept { return distinct_to_woman_; }
  std::span<const std::uint64_t> proposals_to_woman() const noexcept { return all_to_woman_; }
  std::span<const Index> proposals_by_man() const noexcept { return by_man_; }

  /// Redundant re-proposals from `man` to `woman`. The pair's total proposal
  /// count is this plus one whenever the pair was proposed at all.
  std::uint32_t redundant_hits(Index man, Index woman) const;

  /// Largest proposal count over all (man, woman) pairs; 0 before any proposal.
  std::uint32_t max_repeats() const noexcept;

  /// Restore point for rollback. Holds O(n) copies of the counters.
  struct Mark {
    std::uint64_t total = 0;
    std::uint64_t redundant = 0;
    std::vector<Index> distinct_to_woman;
    std::vector<std::uint64_t> all_to_woman;
    std::vector<Index> by_man;
    std::size_t redundant_log_size = 0;
  };

  Mark mark() const;
  void rollback(const Mark& mark);

 private:
  std::uint64_t key(Index man, Index woman) const noexcept {
    return (std::uint64_t{man} << 32) | woman;
  }

  std::uint64_t total_ = 0;
  std::uint64_t redundant_ = 0;
  std::vector<Index> distinct_to_woman_;
  std::vector<std::uint64_t> all_to_woman_;
  std::vector<Index> by_man_;
  std::unordered_map<std::uint64_t, std::uint32_t> redundant_hits_;
  std::vector<std::uint64_t> redundant_log_;
};

}  // namespace smlab
