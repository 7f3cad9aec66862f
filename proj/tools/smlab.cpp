// smlab: command-line front end for sweeps and the stable-set oracle.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "smlab/model.hpp"
#include "smlab/strategy.hpp"
#include "smlab/sweep.hpp"

namespace {

struct SweepArgs {
  std::string preset;
  std::optional<smlab::Index> n_min, n_max, n_step, n;
  std::optional<std::size_t> iters;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> scenarios;
  std::optional<std::string> mode;
  std::optional<smlab::Index> top_k;
  bool force_explicit = false;
  unsigned threads = 0;
  std::string out;
  std::string runs_out;
  bool quiet = false;
};

smlab::SweepConfig build_config(const SweepArgs& a) {
  smlab::SweepConfig c;
  if (!a.preset.empty()) {
    c = smlab::preset(a.preset, a.n.value_or(10000));
  } else {
    c.scenarios = {smlab::StrategyScenario::truthful(), smlab::StrategyScenario::optimal()};
    c.n_values = smlab::n_range(100, 10000, 20);
  }
  if (a.n) {
    c.n_values = {*a.n};
  } else if (a.n_min || a.n_max || a.n_step) {
    const smlab::Index lo = a.n_min.value_or(100);
    c.n_values = smlab::n_range(lo, a.n_max.value_or(lo), a.n_step.value_or(20));
  }
  if (a.iters) c.iterations = *a.iters;
  if (a.seed) c.master_seed = *a.seed;
  if (!a.scenarios.empty()) {
    c.scenarios.clear();
    for (const auto& s : a.scenarios) c.scenarios.push_back(smlab::parse_scenario(s));
  }
  if (a.mode) c.mode = smlab::parse_mode(*a.mode);
  c.top_k = a.top_k;
  c.force_explicit = a.force_explicit;
  c.threads = a.threads;
  c.output_path = a.out;
  return c;
}

int run_sweep_command(const SweepArgs& args) {
  const smlab::SweepConfig config = build_config(args);
  const auto result = smlab::run_sweep_to_file(config);
  if (!args.runs_out.empty()) {
    std::ofstream runs(args.runs_out);
    if (!runs) throw std::runtime_error("cannot open runs file '" + args.runs_out + "'");
    smlab::write_runs_csv(runs, result.runs);
  }
  if (!args.quiet) {
    std::cerr << "wrote " << result.rows.size() << " rows to " << config.output_path << '\n';
  }
  return 0;
}

int run_stable_set_command(smlab::Index n, std::uint64_t seed) {
  const auto profile = smlab::generate_profile(n, seed);
  const auto set = smlab::enumerate_stable_matchings(profile);
  nlohmann::json doc;
  doc["n"] = n;
  doc["seed"] = seed;
  doc["men_prefs"] = profile.men_prefs();
  doc["women_prefs"] = profile.women_prefs();
  auto& list = doc["stable_matchings"] = nlohmann::json::array();
  for (const auto& m : set.matchings) {
    std::vector<smlab::Index> wife(n);
    for (smlab::Index i = 0; i < n; ++i) wife[i] = *m.wife_of(i);
    list.push_back({{"wife_of", wife}});
  }
  doc["best_partner"] = set.best_partner;
  doc["worst_partner"] = set.worst_partner;
  doc["stable_husband_count"] = set.stable_husband_count;
  std::cout << doc.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable matching laboratory: deferred acceptance, a strategic woman, sweeps"};
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Run a Monte Carlo sweep and write a CSV");
  sw->add_option("--preset", sweep.preset, "fig1, fig2, fig3, lemma2 or sweep-truncation")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "lemma2", "sweep-truncation"}));
  sw->add_option("--n-min", sweep.n_min, "smallest market size");
  sw->add_option("--n-max", sweep.n_max, "largest market size");
  sw->add_option("--n-step", sweep.n_step, "step between sizes");
  sw->add_option("--n", sweep.n, "single market size (also the sweep-truncation size)");
  sw->add_option("--iters", sweep.iters, "iterations per (n, scenario)");
  sw->add_option("--seed", sweep.seed, "master seed");
  sw->add_option("--scenario", sweep.scenarios, "truthful | optimal | fixed:L | reject-all")
      ->take_all();
  sw->add_option("--mode", sweep.mode, "explicit | amnesia | auto")
      ->check(CLI::IsMember({"explicit", "amnesia", "auto"}));
  sw->add_option("--top-k", sweep.top_k, "k for the top-k fraction (default ceil(ln(n)^2.5))");
  sw->add_flag("--force-explicit", sweep.force_explicit, "allow explicit mode above n = 5000");
  sw->add_option("--threads", sweep.threads, "worker threads (0 = all cores)");
  sw->add_option("--out", sweep.out, "output CSV path")->required();
  sw->add_option("--runs-out", sweep.runs_out, "optional per-run CSV path");
  sw->add_flag("--quiet", sweep.quiet, "no summary on stderr");

  smlab::Index set_n = 3;
  std::uint64_t set_seed = 1;
  auto* ss = app.add_subcommand("stable-set", "Dump every stable matching of a random profile");
  ss->add_option("--n", set_n, "market size (at most 9)")->required();
  ss->add_option("--seed", set_seed, "profile seed")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sw) return run_sweep_command(sweep);
    if (*ss) return run_stable_set_command(set_n, set_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
