// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "smlab/deferred_acceptance.hpp"
#include "smlab/strategy.hpp"
#include "smlab/sweep.hpp"

namespace {

using smlab::Index;
using smlab::StrategyScenario;

constexpr std::uint64_t kMasterSeed = 1;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

smlab::PreferenceProfile profile_for(std::uint64_t tag, std::uint64_t i, Index lo, Index hi,
                                     Index* n_out) {
  const std::uint64_t seed = smlab::derive_seed({kMasterSeed, tag, i});
  smlab::Rng rng(seed);
  const Index n = lo + static_cast<Index>(rng.below(hi - lo + 1));
  *n_out = n;
  return smlab::generate_profile(n, seed);
}

Verdict exact_da_vs_enumeration() {
  int bad = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Index n;
    const auto p = profile_for(1, i, 2, 7, &n);
    const auto set = smlab::enumerate_stable_matchings(p);
    const auto men = smlab::men_propose_da(smlab::ReportedProfile(p)).matching;
    const auto women = smlab::women_propose_da(p);
    bool ok = std::find(set.matchings.begin(), set.matchings.end(), men) != set.matchings.end() &&
              std::find(set.matchings.begin(), set.matchings.end(), women) != set.matchings.end() &&
              oracle::blocking_pairs(p.men_prefs(), p.women_prefs(), fixture::wives_of(men)).empty();
    for (const auto& other : set.matchings) {
      for (Index a = 0; a < n; ++a) {
        ok &= p.man_rank(a, *men.wife_of(a)) <= p.man_rank(a, *other.wife_of(a));
        ok &= p.woman_rank(a, *men.husband_of(a)) >= p.woman_rank(a, *other.husband_of(a));
        ok &= p.woman_rank(a, *women.husband_of(a)) <= p.woman_rank(a, *other.husband_of(a));
      }
    }
    bad += !ok;
  }
  return {bad == 0, format("500 profiles, n in 2..7, %d mismatches", bad)};
}

// Criteria 2 and 3 share their profiles.
struct StrategicExact {
  int route_mismatch = 0;
  int unstable_or_partial = 0;
};

StrategicExact strategic_exact() {
  StrategicExact r;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Index n;
    const auto p = profile_for(2, i, 2, 50, &n);
    const Index g = static_cast<Index>(smlab::derive_seed({i, 0x9}) % n);
    const auto process = smlab::rejection_process(p, g);
    const auto truncated = smlab::men_propose_da(smlab::optimal_truncation(p, g)).matching;
    r.route_mismatch += !(process.matching == truncated);
    r.unstable_or_partial +=
        !process.matching.is_perfect() ||
        !oracle::blocking_pairs(p.men_prefs(), p.women_prefs(), fixture::wives_of(process.matching))
             .empty();
  }
  return r;
}

Verdict per_instance_dominance() {
  int bad = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Index n;
    const auto p = profile_for(4, i, 2, 500, &n);
    const auto truthful = smlab::men_propose_da(smlab::ReportedProfile(p)).matching;
    const auto strategic = smlab::rejection_process(p, 0).matching;
    bool ok = true;
    for (Index a = 0; a < n; ++a) {
      ok &= p.woman_rank(a, *strategic.husband_of(a)) <= p.woman_rank(a, *truthful.husband_of(a));
      ok &= p.man_rank(a, *strategic.wife_of(a)) >= p.man_rank(a, *truthful.wife_of(a));
    }
    bad += !ok;
  }
  return {bad == 0, format("100 explicit instances, n in 2..500, %d violations", bad)};
}

Verdict order_invariance() {
  int bad = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Index n;
    const auto p = profile_for(5, i, 2, 100, &n);
    const smlab::ReportedProfile report(p);
    const auto reference = smlab::men_propose_da(report).matching;
    for (std::uint64_t s = 0; s < 20; ++s) {
      bad += !(smlab::men_propose_da_shuffled(report, smlab::derive_seed({i, s})) == reference);
    }
  }
  return {bad == 0, format("100 profiles x 20 orders, %d differing matchings", bad)};
}

Verdict truncation_optimality() {
  int bad = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Index n;
    const auto p = profile_for(6, i, 1, 6, &n);
    const Index g = static_cast<Index>(i % n);
    const auto m = smlab::men_propose_da(smlab::optimal_truncation(p, g)).matching;
    const Index achieved = p.woman_rank(g, *m.husband_of(g));
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      std::vector<std::vector<bool>> allowed(n, std::vector<bool>(n, true));
      for (Index x = 0; x < n; ++x) allowed[g][x] = (mask >> x) & 1U;
      const auto wife = oracle::gale_shapley_rounds(p.men_prefs(), p.women_prefs(), allowed);
      for (Index x = 0; x < n; ++x) {
        if (wife[x] == static_cast<int>(g) && p.woman_rank(g, x) < achieved) {
          ++bad;
          break;
        }
      }
    }
  }
  return {bad == 0, format("100 profiles, n <= 6, all subset reports, %d beat the truncation", bad)};
}

Verdict amnesia_explicit_ks() {
  constexpr Index n = 20;
  constexpr int runs = 2000;
  std::vector<double> a, b;
  for (int i = 0; i < runs; ++i) {
    const auto k = smlab::default_top_k(n);
    a.push_back(smlab::run_instance(n, StrategyScenario::truthful(), smlab::Mode::Explicit,
                                    smlab::derive_seed({kMasterSeed, 7, 0, std::uint64_t(i)}), k)
                    .avg_women_rank);
    b.push_back(smlab::run_instance(n, StrategyScenario::truthful(), smlab::Mode::Amnesia,
                                    smlab::derive_seed({kMasterSeed, 7, 1, std::uint64_t(i)}), k)
                    .avg_women_rank);
  }
  const double d = oracle::ks_statistic(a, b);
  const double crit = oracle::ks_critical(0.01, a.size(), b.size());
  return {d < crit, format("n=20, 2000 runs per mode, D=%.4f, critical %.4f", d, crit)};
}

smlab::SweepResult sweep(std::vector<Index> n_values, std::vector<StrategyScenario> scenarios,
                         std::size_t iterations, smlab::Mode mode = smlab::Mode::Auto) {
  smlab::SweepConfig c;
  c.name = "acceptance";
  c.n_values = std::move(n_values);
  c.scenarios = std::move(scenarios);
  c.iterations = iterations;
  c.mode = mode;
  c.master_seed = kMasterSeed;
  return smlab::run_sweep(c);
}

Verdict g_rank_band() {
  const auto r = sweep({1000}, {StrategyScenario::optimal()}, 300);
  const auto& row = r.rows[0];
  return {row.frac_g_within_threshold >= 0.99,
          format("n=1000, 300 runs, g rank <= %.1f in %.4f of runs (mean %.2f)", row.g_rank_threshold,
                 row.frac_g_within_threshold, row.mean_g_rank)};
}

void report(int id, const Verdict& v, int& failures) {
  std::printf("%s %2d: %s\n", v.pass ? "PASS" : "FAIL", id, v.detail.c_str());
  std::fflush(stdout);
  failures += !v.pass;
}

}  // namespace

int main() {
  int failures = 0;
  report(1, exact_da_vs_enumeration(), failures);
  const auto se = strategic_exact();
  report(2, {se.route_mismatch == 0,
             format("500 profiles, n in 2..50, %d route mismatches", se.route_mismatch)},
         failures);
  report(3, {se.unstable_or_partial == 0,
             format("500 profiles, %d outcomes blocked under true preferences or not perfect",
                    se.unstable_or_partial)},
         failures);
  report(4, per_instance_dominance(), failures);
  report(5, order_invariance(), failures);
  report(6, truncation_optimality(), failures);
  report(7, amnesia_explicit_ks(), failures);
  report(8, g_rank_band(), failures);

  {
    const auto start = std::chrono::steady_clock::now();
    const auto r = sweep({10000}, {StrategyScenario::truthful(), StrategyScenario::optimal()}, 100);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto& truthful = r.rows[0];
    const auto& strategic = r.rows[1];
    const double ln = std::log(10000.0);
    const double women = strategic.mean_avg_women_rank;
    const bool in_band = women >= ln && women <= 3 * ln * ln;
    const double ratio = truthful.mean_avg_women_rank / women;
    report(9, {in_band && ratio >= 20.0 && seconds < 600.0,
               format("n=10000, 100 runs: strategic women %.2f in [%.1f, %.1f]: %s; truthful %.2f is "
                      "%.2fx strategic (need >= 20); %.0f s",
                      women, ln, 3 * ln * ln, in_band ? "yes" : "no", truthful.mean_avg_women_rank,
                      ratio, seconds)},
           failures);
    const double men_floor = 10000.0 / (10.0 * ln * ln);
    report(10, {strategic.mean_avg_men_rank >= men_floor,
                format("n=10000, strategic men %.2f, floor n/(10 ln^2 n) = %.2f",
                       strategic.mean_avg_men_rank, men_floor)},
           failures);
  }

  {
    const auto r = sweep({1000, 2000, 5000}, {StrategyScenario::optimal()}, 100);
    bool ok = true;
    std::string detail;
    for (const auto& row : r.rows) {
      ok &= std::abs(row.mean_frac_best_stable - 0.5) <= 0.05 &&
            row.mean_frac_best_or_worst >= row.mean_frac_best_stable &&
            row.best_stable_runs == row.iterations;
      detail += format("n=%u best %.4f either %.4f; ", row.n, row.mean_frac_best_stable,
                       row.mean_frac_best_or_worst);
    }
    detail.resize(detail.size() - 2);
    report(11, {ok, detail}, failures);
  }

  {
    const auto r = sweep({1000}, {StrategyScenario::truthful()}, 100);
    const auto& row = r.rows[0];
    const double women_ref = 1000.0 / std::log(1000.0);
    const double men_ref = std::log(1000.0);
    const bool ok = std::abs(row.mean_avg_women_rank / women_ref - 1) <= 0.2 &&
                    std::abs(row.mean_avg_men_rank / men_ref - 1) <= 0.2;
    report(12, {ok, format("n=1000 truthful: women %.2f vs %.1f, men %.3f vs %.3f (+-20%%)",
                           row.mean_avg_women_rank, women_ref, row.mean_avg_men_rank, men_ref)},
           failures);
  }

  {
    const auto r = sweep({500}, {StrategyScenario::optimal()}, 1000, smlab::Mode::Amnesia);
    const double limit = 20 * std::log(500.0);
    std::size_t over = 0;
    std::uint32_t worst = 0;
    for (const auto& run : r.runs) {
      over += run.result.max_repeat_proposals > limit;
      worst = std::max(worst, run.result.max_repeat_proposals);
    }
    const double rate = static_cast<double>(over) / r.runs.size();
    report(13, {rate <= 0.01, format("n=500, 1000 strategic runs: %zu exceed %.1f repeats (rate "
                                     "%.4f), largest %u",
                                     over, limit, rate, worst)},
           failures);
  }

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
