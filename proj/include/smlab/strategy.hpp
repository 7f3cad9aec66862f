// A single strategic woman g who sees every other list: her best stable
// husband, the truncation that secures him, and the equivalent process in
// which she keeps rejecting her holding until one more rejection would leave
// some man without a partner.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smlab/deferred_acceptance.hpp"
#include "smlab/ledger.hpp"
#include "smlab/model.hpp"

namespace smlab {

struct StrategyScenario {
  enum class Kind { Truthful, OptimalTruncation, FixedTruncation, RejectAll };

  Kind kind = Kind::Truthful;
  Index strategic_woman = 0;
  Index list_length = 0;  // FixedTruncation only

  static StrategyScenario truthful(Index g = 0) { return {Kind::Truthful, g, 0}; }
  static StrategyScenario optimal(Index g = 0) { return {Kind::OptimalTruncation, g, 0}; }
  static StrategyScenario fixed(Index length, Index g = 0) {
    return {Kind::FixedTruncation, g, length};
  }
  static StrategyScenario reject_all(Index g = 0) { return {Kind::RejectAll, g, 0}; }

  /// Cutoff g reports for a fixed-length scenario (RejectAll is length 0).
  Index effective_length() const noexcept {
    return kind == Kind::RejectAll ? 0 : list_length;
  }

  /// "truthful", "optimal", "fixed:L" or "reject-all".
  std::string tag() const;

  friend bool operator==(const StrategyScenario&, const StrategyScenario&) = default;
};

/// Inverse of StrategyScenario::tag. Throws std::invalid_argument.
StrategyScenario parse_scenario(std::string_view text, Index strategic_woman = 0);

struct RejectionTrace {
  std::vector<Index> proposals_to_g;  // distinct proposers, in arrival order
  std::vector<Index> holdings;        // g's successive holdings, improving
  bool rollback_triggered = false;
};

struct RejectionOutcome {
  Matching matching;
  RejectionTrace trace;
  ProposalLedger ledger;
};

/// g's partner in the woman-optimal stable matching.
Index best_stable_partner(const PreferenceProfile& profile, Index g);

/// Truthful report except that g's list ends at her best stable partner.
ReportedProfile optimal_truncation(const PreferenceProfile& profile, Index g);

/// Men-proposing DA followed by rounds in which g rejects her holding. Each
/// round snapshots the market first; a round whose chain exhausts some man is
/// rolled back and the process stops.
RejectionOutcome rejection_process(const PreferenceProfile& profile, Index g);

/// Report induced by a scenario. Throws std::invalid_argument for a fixed
/// length above n or a strategic woman out of range.
ReportedProfile apply_scenario(const PreferenceProfile& profile, const StrategyScenario& scenario);

}  // namespace smlab
