#include "smlab/deferred_acceptance.hpp"

#include "smlab/rng.hpp"

namespace smlab {

ProposalMarket::ProposalMarket(const ReportedProfile& reported)
    : reported_(reported),
      n_(reported.size()),
      next_(reported.size(), 0),
      matching_(reported.size()),
      ledger_(reported.size()) {}

ProposalMarket::Step ProposalMarket::propose(Index m) {
  if (next_[m] >= n_) return {Step::Kind::Exhausted};
  const PreferenceProfile& p = reported_.base();
  const Index w = p.man_list(m)[next_[m]++];
  ledger_.record_distinct(m, w);
  if (w == watched_) watched_log_.push_back(m);
  if (!reported_.acceptable(w, m)) return {Step::Kind::Rejected, w};
  const auto holder = matching_.husband_of(w);
  if (holder && p.woman_rank(w, *holder) < p.woman_rank(w, m)) {
    return {Step::Kind::Rejected, w};
  }
  matching_.pair(m, w);
  return {Step::Kind::Held, w, holder.value_or(kNone)};
}

ProposalMarket::ChainEnd ProposalMarket::run_chain(Index m) {
  for (;;) {
    const Step s = propose(m);
    switch (s.kind) {
      case Step::Kind::Exhausted:
        return {ChainEnd::Kind::Exhausted, kNone, m};
      case Step::Kind::Rejected:
        break;
      case Step::Kind::Held:
        if (s.displaced == kNone) return {ChainEnd::Kind::Settled, s.woman, kNone};
        m = s.displaced;
        break;
    }
  }
}

std::optional<Index> ProposalMarket::truncate(Index w, Index len) {
  reported_ = reported_.with_truncation(w, len);
  const auto holder = matching_.husband_of(w);
  if (holder) matching_.unpair_man(*holder);
  return holder;
}

DaResult men_propose_da(const ReportedProfile& reported) {
  ProposalMarket market(reported);
  for (Index m = 0; m < reported.size(); ++m) market.run_chain(m);
  return {market.matching(), market.ledger()};
}

Matching women_propose_da(const PreferenceProfile& profile) {
  const Index n = profile.size();
  std::vector<Index> next(n, 0);
  std::vector<Index> held(n, kNone);  // per man: woman he holds
  Matching out(n);
  for (Index start = 0; start < n; ++start) {
    Index w = start;
    while (w != kNone) {
      const Index m = profile.woman_list(w)[next[w]++];
      const Index cur = held[m];
      if (cur != kNone && profile.man_rank(m, cur) < profile.man_rank(m, w)) continue;
      held[m] = w;
      out.pair(m, w);
      w = cur;
    }
  }
  return out;
}

Matching men_propose_da_shuffled(const ReportedProfile& reported, std::uint64_t order_seed) {
  ProposalMarket market(reported);
  Rng rng(order_seed);
  std::vector<Index> free_men(reported.size());
  for (Index m = 0; m < reported.size(); ++m) free_men[m] = m;
  while (!free_men.empty()) {
    const std::size_t pick = rng.below(free_men.size());
    const Index m = free_men[pick];
    const auto s = market.propose(m);
    using Kind = ProposalMarket::Step::Kind;
    if (s.kind == Kind::Rejected) continue;
    // Swap-remove m from the pool; the displaced man (if any) takes his slot.
    if (s.kind == Kind::Held && s.displaced != kNone) {
      free_men[pick] = s.displaced;
    } else {
      free_men[pick] = free_men.back();
      free_men.pop_back();
    }
  }
  return market.matching();
}

}  // namespace smlab
