#include "smlab/strategy.hpp"

#include <charconv>
#include <stdexcept>

namespace smlab {

std::string StrategyScenario::tag() const {
  switch (kind) {
    case Kind::Truthful:
      return "truthful";
    case Kind::OptimalTruncation:
      return "optimal";
    case Kind::FixedTruncation:
      return "fixed:" + std::to_string(list_length);
    case Kind::RejectAll:
      return "reject-all";
  }
  return {};
}

StrategyScenario parse_scenario(std::string_view text, Index strategic_woman) {
  if (text == "truthful") return StrategyScenario::truthful(strategic_woman);
  if (text == "optimal") return StrategyScenario::optimal(strategic_woman);
  if (text == "reject-all") return StrategyScenario::reject_all(strategic_woman);
  if (text.starts_with("fixed:")) {
    const auto digits = text.substr(6);
    Index len = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), len);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) {
      return StrategyScenario::fixed(len, strategic_woman);
    }
  }
  throw std::invalid_argument("unknown scenario '" + std::string(text) +
                              "' (expected truthful, optimal, fixed:L or reject-all)");
}

Index best_stable_partner(const PreferenceProfile& profile, Index g) {
  if (g >= profile.size()) throw std::out_of_range("strategic woman out of range");
  return *women_propose_da(profile).husband_of(g);
}

ReportedProfile optimal_truncation(const PreferenceProfile& profile, Index g) {
  const Index b0 = best_stable_partner(profile, g);
  return ReportedProfile(profile).with_truncation(g, profile.woman_rank(g, b0));
}

RejectionOutcome rejection_process(const PreferenceProfile& profile, Index g) {
  if (g >= profile.size()) throw std::out_of_range("strategic woman out of range");
  ProposalMarket market{ReportedProfile(profile)};
  market.watch(g);
  for (Index m = 0; m < profile.size(); ++m) market.run_chain(m);

  RejectionTrace trace;
  trace.holdings.push_back(*market.matching().husband_of(g));
  for (;;) {
    const ProposalMarket snapshot = market;
    const Index held = trace.holdings.back();
    const auto released = market.truncate(g, profile.woman_rank(g, held) - 1);
    const auto end = market.run_chain(*released);
    if (end.kind == ProposalMarket::ChainEnd::Kind::Exhausted) {
      market = snapshot;
      trace.rollback_triggered = true;
      break;
    }
    // With everyone else holding a partner, only g can settle a chain.
    trace.holdings.push_back(*market.matching().husband_of(g));
  }
  trace.proposals_to_g = market.watched_proposers();
  return {market.matching(), std::move(trace), market.ledger()};
}

ReportedProfile apply_scenario(const PreferenceProfile& profile, const StrategyScenario& scenario) {
  const Index g = scenario.strategic_woman;
  if (g >= profile.size()) throw std::invalid_argument("strategic woman out of range");
  switch (scenario.kind) {
    case StrategyScenario::Kind::Truthful:
      return ReportedProfile(profile);
    case StrategyScenario::Kind::OptimalTruncation:
      return optimal_truncation(profile, g);
    case StrategyScenario::Kind::FixedTruncation:
    case StrategyScenario::Kind::RejectAll:
      if (scenario.effective_length() > profile.size()) {
        throw std::invalid_argument("truncation length exceeds market size");
      }
      return ReportedProfile(profile).with_truncation(g, scenario.effective_length());
  }
  throw std::invalid_argument("unknown scenario kind");
}

}  // namespace smlab
