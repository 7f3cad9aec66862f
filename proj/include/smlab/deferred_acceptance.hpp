// Deferred acceptance over explicit preference lists.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smlab/ledger.hpp"
#include "smlab/model.hpp"

namespace smlab {

/// Resumable men-proposing state over a reported profile. Women hold their
/// best acceptable proposer so far; men walk down their lists in order.
/// Copyable, so a copy serves as a snapshot for rollback.
class ProposalMarket {
 public:
  explicit ProposalMarket(const ReportedProfile& reported);

  struct Step {
    enum class Kind { Rejected, Held, Exhausted } kind;
    Index woman = kNone;      // who received the proposal (kNone when exhausted)
    Index displaced = kNone;  // man released by the woman, if any
  };

  /// Man m (who must be free) proposes to the next woman on his list.
  Step propose(Index m);

  struct ChainEnd {
    enum class Kind { Settled, Exhausted } kind;
    Index woman = kNone;  // Settled: the previously unheld woman who accepted
    Index man = kNone;    // Exhausted: the man who ran out of women
  };

  /// Runs the rejection chain started by free man m: proposals continue, each
  /// displaced man taking over, until a woman who held nobody accepts or some
  /// man exhausts his list (he then stays single).
  ChainEnd run_chain(Index m);

  /// Woman w drops her current holding and shortens her list to `len`.
  /// Returns the released man, if any.
  std::optional<Index> truncate(Index w, Index len);

  Index size() const noexcept { return n_; }
  const Matching& matching() const noexcept { return matching_; }
  const ProposalLedger& ledger() const noexcept { return ledger_; }
  ProposalLedger& ledger() noexcept { return ledger_; }
  const ReportedProfile& reported() const noexcept { return reported_; }
  bool exhausted(Index m) const noexcept { return next_[m] >= n_; }

  /// Records every distinct proposer to `w`, in order.
  void watch(Index w) { watched_ = w; }
  const std::vector<Index>& watched_proposers() const noexcept { return watched_log_; }

 private:
  ReportedProfile reported_;
  Index n_;
  std::vector<Index> next_;  // index of the next woman each man will propose to
  Matching matching_;
  ProposalLedger ledger_;
  Index watched_ = kNone;
  std::vector<Index> watched_log_;
};

struct DaResult {
  Matching matching;
  ProposalLedger ledger;
};

/// Men-proposing deferred acceptance. Men enter one at a time and each
/// rejection chain runs to completion before the next man enters.
DaResult men_propose_da(const ReportedProfile& reported);

/// Women-proposing deferred acceptance on full lists: the woman-optimal
/// stable matching.
Matching women_propose_da(const PreferenceProfile& profile);

/// Men-proposing deferred acceptance where every single proposal is made by
/// a free man chosen uniformly at random.
Matching men_propose_da_shuffled(const ReportedProfile& reported, std::uint64_t order_seed);

}  // namespace smlab
