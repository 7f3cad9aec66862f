#include "smlab/amnesia.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace smlab {

Index realize_rank(Index better_seen, Index unseen, double score, Rng& rng) {
  Index beat_by_unseen = 0;
  if (unseen > 0 && score > 0.0) {
    std::binomial_distribution<Index> binom(unseen, std::min(score, 1.0));
    beat_by_unseen = binom(rng);
  }
  return 1 + better_seen + beat_by_unseen;
}

Index realize_global_rank(std::span<const SeenProposer> seen, Index partner, Index n, Rng& rng) {
  if (seen.size() > n) throw std::invalid_argument("more proposers seen than men in the market");
  const auto it = std::find_if(seen.begin(), seen.end(),
                               [&](const SeenProposer& s) { return s.man == partner; });
  if (it == seen.end()) throw std::invalid_argument("partner was never seen by this woman");
  const double score = it->score;
  const auto better = static_cast<Index>(std::count_if(
      seen.begin(), seen.end(), [&](const SeenProposer& s) { return s.score < score; }));
  return realize_rank(better, n - static_cast<Index>(seen.size()), score, rng);
}

namespace {

// A proposal made during the final (rolled back) rejection round that beat
// the woman's partner in the restored state. man_pos is the woman's position
// in the man's realized list.
struct BetterProposal {
  Index man;
  double score;
  Index man_pos;
};

class LazyMarket {
 public:
  LazyMarket(Index n, Index g, std::uint64_t seed)
      : n_(n),
        g_(g),
        rng_(seed),
        men_(n, LazyManState(n)),
        women_(n),
        wife_(n, kNone),
        ledger_(n),
        g_scores_(n),
        better_(n) {
    Rng g_rng = rng_.split(0x67);
    for (auto& s : g_scores_) s = g_rng.uniform01();
  }

  enum class ChainEnd { Settled, Exhausted };

  ChainEnd run_chain(Index p) {
    for (;;) {
      LazyManState& man = men_[p];
      if (man.size() == n_) return ChainEnd::Exhausted;
      const auto h = static_cast<Index>(rng_.below(n_));
      if (!man.insert(h)) {
        ledger_.record_redundant(p, h);
        continue;
      }
      ledger_.record_distinct(p, h);
      const double score = h == g_ ? g_scores_[p] : rng_.uniform01();
      if (capture_ && score < snapshot_women_[h].best_score) {
        if (better_[h].empty()) touched_.push_back(h);
        better_[h].push_back({p, score, man.size()});
      }
      LazyWomanState& woman = women_[h];
      const Index previous = woman.best_man;
      if (!woman.offer(p, score)) continue;
      wife_[p] = h;
      if (previous == kNone) return ChainEnd::Settled;
      wife_[previous] = kNone;
      p = previous;
    }
  }

  void run_phase_one() {
    for (Index m = 0; m < n_; ++m) run_chain(m);
    men_optimal_.resize(n_);
    for (Index w = 0; w < n_; ++w) men_optimal_[w] = women_[w].best_man;
  }

  // g rejects her holding round after round; the round that exhausts a man
  // is undone and ends the process.
  void run_rejection_rounds() {
    g_holdings_ = 1;
    for (;;) {
      snapshot_women_ = women_;
      const std::vector<Index> snapshot_wife = wife_;
      const ProposalLedger::Mark mark = ledger_.mark();
      for (Index w : touched_) better_[w].clear();
      touched_.clear();
      capture_ = true;

      const Index released = women_[g_].best_man;
      women_[g_].best_man = kNone;  // best_score stays as her threshold
      wife_[released] = kNone;
      if (run_chain(released) == ChainEnd::Settled) {
        ++g_holdings_;
        continue;
      }
      capture_ = false;
      seen_by_woman_.assign(ledger_.distinct_to_woman().begin(),
                            ledger_.distinct_to_woman().end());
      women_ = snapshot_women_;
      wife_ = snapshot_wife;
      ledger_.rollback(mark);
      rolled_back_ = true;
      return;
    }
  }

  // g keeps only her top `len` men; the rejected holding walks on.
  void apply_cutoff(Index len) {
    double cutoff = -1.0;
    if (len > 0) {
      std::vector<double> sorted = g_scores_;
      std::nth_element(sorted.begin(), sorted.begin() + (len - 1), sorted.end());
      cutoff = std::nextafter(sorted[len - 1], 2.0);
    }
    LazyWomanState& gs = women_[g_];
    if (gs.best_score < cutoff) return;
    const Index released = gs.best_man;
    gs.best_man = kNone;
    gs.best_score = cutoff;
    wife_[released] = kNone;
    run_chain(released);
  }

  SimOutcome finish(bool want_best) {
    SimOutcome out;
    out.rollback_triggered = rolled_back_;
    out.g_holdings = g_holdings_;
    out.matching = Matching(n_);
    out.man_ranks.assign(n_, std::nullopt);
    out.woman_ranks.assign(n_, std::nullopt);
    out.worst_stable.assign(n_, false);
    beaten_by_unseen_.assign(n_, 0);

    for (Index w = 0; w < n_; ++w) {
      const LazyWomanState& st = women_[w];
      if (st.best_man == kNone) continue;
      const Index m = st.best_man;
      out.matching.pair(m, w);
      out.man_ranks[m] = ledger_.proposals_by_man(m);
      out.worst_stable[w] = men_optimal_[w] == m;
      if (w == g_) {
        const auto better = static_cast<Index>(std::count_if(
            g_scores_.begin(), g_scores_.end(), [&](double s) { return s < st.best_score; }));
        out.woman_ranks[w] = 1 + better;
        out.g_rank = out.woman_ranks[w];
        continue;
      }
      const Index seen = rolled_back_ ? seen_by_woman_[w] : ledger_.distinct_to_woman(w);
      const auto better = static_cast<Index>(better_[w].size());
      const Index rank = realize_rank(better, n_ - seen, st.best_score, rng_);
      beaten_by_unseen_[w] = rank - 1 - better;
      out.woman_ranks[w] = rank;
    }
    if (want_best && out.matching.is_perfect()) out.best_stable = best_stable_flags();
    out.ledger = std::move(ledger_);
    return out;
  }

  Index g() const noexcept { return g_; }

 private:
  // Woman-proposing deferred acceptance on the realized market, extended
  // lazily. A woman never proposes below her current partner, so her list
  // only needs the men scoring under her partner's score: the failed-round
  // proposers that beat him, and the unseen men counted by her realized rank,
  // whose scores are order statistics of uniforms on [0, partner score). A
  // man compares realized list positions directly; women he never drew sit
  // in his unrealized tail in uniformly random order, after every realized
  // woman.
  struct Candidate {
    double score;
    Index man;
    bool in_tail;
    Index man_pos;
  };

  struct Cursor {
    std::vector<Candidate> known;
    std::size_t next_known = 0;
    Index fresh_left = 0;
    double fresh_floor = 0.0;
    double ceiling = 0.0;
    std::optional<Candidate> fresh;
    std::vector<Index> drawn;
  };

  void refill_fresh(Index w, Cursor& c) {
    if (c.fresh || c.fresh_left == 0) return;
    const double u = rng_.uniform01();
    const double score =
        c.fresh_floor + (c.ceiling - c.fresh_floor) * (1.0 - std::pow(u, 1.0 / c.fresh_left));
    --c.fresh_left;
    c.fresh_floor = score;
    Index m = 0;
    do {
      m = static_cast<Index>(rng_.below(n_));
    } while (men_[m].contains(w) ||
             std::find(c.drawn.begin(), c.drawn.end(), m) != c.drawn.end());
    c.drawn.push_back(m);
    c.fresh = Candidate{score, m, true, 0};
  }

  std::optional<Candidate> next_candidate(Index w, Cursor& c) {
    refill_fresh(w, c);
    const bool has_known = c.next_known < c.known.size();
    if (c.fresh && (!has_known || c.fresh->score < c.known[c.next_known].score)) {
      Candidate out = *c.fresh;
      c.fresh.reset();
      return out;
    }
    if (has_known) return c.known[c.next_known++];
    return std::nullopt;
  }

  std::vector<bool> best_stable_flags() {
    std::vector<Cursor> cursors(n_);
    for (Index w = 0; w < n_; ++w) {
      Cursor& c = cursors[w];
      const LazyWomanState& st = women_[w];
      const Index partner = st.best_man;
      if (w == g_) {
        for (Index m = 0; m < n_; ++m) {
          if (g_scores_[m] < st.best_score) c.known.push_back({g_scores_[m], m, true, 0});
        }
      } else {
        for (const BetterProposal& b : better_[w]) c.known.push_back({b.score, b.man, false, b.man_pos});
        c.fresh_left = beaten_by_unseen_[w];
        c.ceiling = st.best_score;
      }
      c.known.push_back({st.best_score, partner, false, ledger_.proposals_by_man(partner)});
      std::sort(c.known.begin(), c.known.end(),
                [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
    }

    struct Held {
      Index woman = kNone;
      bool in_tail = false;
      double key = 0.0;
    };
    std::vector<Held> held(n_);
    std::vector<Index> husband(n_, kNone);
    for (Index start = 0; start < n_; ++start) {
      Index w = start;
      while (w != kNone) {
        const auto cand = next_candidate(w, cursors[w]);
        if (!cand) throw std::logic_error("woman ran out of candidates above her partner");
        Held offer{w, cand->in_tail,
                   cand->in_tail ? rng_.uniform01() : static_cast<double>(cand->man_pos)};
        Held& cur = held[cand->man];
        const bool better = cur.woman == kNone || (!offer.in_tail && cur.in_tail) ||
                            (offer.in_tail == cur.in_tail && offer.key < cur.key);
        if (!better) continue;
        const Index displaced = cur.woman;
        cur = offer;
        husband[w] = cand->man;
        w = displaced;
      }
    }
    std::vector<bool> flags(n_);
    for (Index w = 0; w < n_; ++w) flags[w] = husband[w] == women_[w].best_man;
    return flags;
  }

  Index n_;
  Index g_;
  Rng rng_;
  std::vector<LazyManState> men_;
  std::vector<LazyWomanState> women_;
  std::vector<Index> wife_;
  ProposalLedger ledger_;
  std::vector<double> g_scores_;
  std::vector<Index> men_optimal_;  // per woman, her phase-one holding

  bool capture_ = false;
  bool rolled_back_ = false;
  Index g_holdings_ = 0;
  std::vector<LazyWomanState> snapshot_women_;
  std::vector<std::vector<BetterProposal>> better_;
  std::vector<Index> touched_;
  std::vector<Index> seen_by_woman_;
  std::vector<Index> beaten_by_unseen_;
};

}  // namespace

SimOutcome simulate_amnesia(Index n, const StrategyScenario& scenario, std::uint64_t seed,
                            const AmnesiaOptions& options) {
  if (n == 0) throw std::invalid_argument("market size must be at least 1");
  if (scenario.strategic_woman >= n) throw std::invalid_argument("strategic woman out of range");
  if (scenario.effective_length() > n) {
    throw std::invalid_argument("truncation length exceeds market size");
  }
  LazyMarket market(n, scenario.strategic_woman, seed);
  market.run_phase_one();
  switch (scenario.kind) {
    case StrategyScenario::Kind::Truthful:
      break;
    case StrategyScenario::Kind::OptimalTruncation:
      market.run_rejection_rounds();
      break;
    case StrategyScenario::Kind::FixedTruncation:
    case StrategyScenario::Kind::RejectAll:
      market.apply_cutoff(scenario.effective_length());
      break;
  }
  return market.finish(options.stable_partner_flags);
}

}  // namespace smlab
