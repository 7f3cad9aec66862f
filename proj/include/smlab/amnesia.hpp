// Large-market simulation with lazily realized uniform preferences.
//
// Nothing of size n x n is ranked up front. A proposing man draws his next
// woman uniformly from all n ("amnesia"); a draw of someone he already
// proposed to is redundant, counted, and redrawn. Each woman scores a new
// proposer with a fresh uniform(0,1) value (lower is better) and holds the
// best score seen, so her k-th distinct proposal is accepted with
// probability 1/k. Only the strategic woman's scores are realized for every
// man, since her cutoffs depend on her global order.
//
// Global ranks are realized at the end: everyone a woman never heard from
// has an independent uniform score, so the number of unseen men who beat her
// partner is Binomial(unseen, partner score).

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "smlab/ledger.hpp"
#include "smlab/model.hpp"
#include "smlab/rng.hpp"
#include "smlab/strategy.hpp"

namespace smlab {

/// Women a man has proposed to, with O(1) insert and membership test.
class LazyManState {
 public:
  explicit LazyManState(Index n = 0) : bits_((std::size_t{n} + 63) / 64, 0) {}

  bool contains(Index w) const noexcept { return (bits_[w >> 6] >> (w & 63)) & 1U; }
  /// Returns false if w was already present.
  bool insert(Index w) noexcept {
    auto& word = bits_[w >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (w & 63);
    if (word & bit) return false;
    word |= bit;
    ++size_;
    return true;
  }
  Index size() const noexcept { return size_; }

 private:
  std::vector<std::uint64_t> bits_;
  Index size_ = 0;
};

struct LazyWomanState {
  Index distinct_count = 0;
  double best_score = std::numeric_limits<double>::infinity();
  Index best_man = kNone;

  /// Registers a new distinct proposer. Holds him when his score beats every
  /// earlier one (or her current threshold) and returns true.
  bool offer(Index man, double score) noexcept {
    ++distinct_count;
    if (!(score < best_score)) return false;
    best_score = score;
    best_man = man;
    return true;
  }
};

struct SeenProposer {
  Index man;
  double score;
};

/// 1 + better_seen + Binomial(unseen, score).
Index realize_rank(Index better_seen, Index unseen, double score, Rng& rng);

/// Global rank of `partner` among n men for a woman who has scored `seen`.
/// Throws std::invalid_argument if `partner` is not among `seen` or if more
/// than n men were seen.
Index realize_global_rank(std::span<const SeenProposer> seen, Index partner, Index n, Rng& rng);

struct SimOutcome {
  Matching matching;
  ProposalLedger ledger;
  std::optional<Index> g_rank;
  std::vector<std::optional<Index>> man_ranks;
  std::vector<std::optional<Index>> woman_ranks;
  /// Per woman: matched to her partner in the men-optimal stable matching.
  std::vector<bool> worst_stable;
  /// Per woman: matched to her partner in the woman-optimal stable matching.
  /// Present only when the final matching is stable (all agents matched).
  std::optional<std::vector<bool>> best_stable;
  /// Partners g held, phase-1 holding included (OptimalTruncation only).
  Index g_holdings = 0;
  bool rollback_triggered = false;
};

struct AmnesiaOptions {
  /// Realize enough extra preference to find every woman's best stable
  /// husband. Runs after everything else, so disabling it does not change
  /// the remaining outputs.
  bool stable_partner_flags = true;
};

/// Runs the lazily realized market under `scenario`; deterministic in
/// (n, scenario, seed). Throws std::invalid_argument for n = 0, a strategic
/// woman out of range, or a fixed length above n.
SimOutcome simulate_amnesia(Index n, const StrategyScenario& scenario, std::uint64_t seed,
                            const AmnesiaOptions& options = {});

}  // namespace smlab
