#include "smlab/ledger.hpp"

#include <algorithm>

namespace smlab {

ProposalLedger::ProposalLedger(Index n)
    : distinct_to_woman_(n, 0), all_to_woman_(n, 0), by_man_(n, 0) {}

void ProposalLedger::record_distinct(Index man, Index woman) {
  ++total_;
  ++distinct_to_woman_[woman];
  ++all_to_woman_[woman];
  ++by_man_[man];
}

void ProposalLedger::record_redundant(Index man, Index woman) {
  ++total_;
  ++redundant_;
  ++all_to_woman_[woman];
  const auto k = key(man, woman);
  ++redundant_hits_[k];
  redundant_log_.push_back(k);
}

std::uint32_t ProposalLedger::redundant_hits(Index man, Index woman) const {
  const auto it = redundant_hits_.find(key(man, woman));
  return it == redundant_hits_.end() ? 0 : it->second;
}

std::uint32_t ProposalLedger::max_repeats() const noexcept {
  if (total_ == 0) return 0;
  std::uint32_t extra = 0;
  for (const auto& [k, hits] : redundant_hits_) extra = std::max(extra, hits);
  return extra + 1;
}

ProposalLedger::Mark ProposalLedger::mark() const {
  return Mark{total_, redundant_, distinct_to_woman_, all_to_woman_, by_man_,
              redundant_log_.size()};
}

void ProposalLedger::rollback(const Mark& mark) {
  total_ = mark.total;
  redundant_ = mark.redundant;
  distinct_to_woman_ = mark.distinct_to_woman;
  all_to_woman_ = mark.all_to_woman;
  by_man_ = mark.by_man;
  while (redundant_log_.size() > mark.redundant_log_size) {
    const auto k = redundant_log_.back();
    redundant_log_.pop_back();
    auto it = redundant_hits_.find(k);
    if (--it->second == 0) redundant_hits_.erase(it);
  }
}

}  // namespace smlab
