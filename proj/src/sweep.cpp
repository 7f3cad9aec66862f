#include "smlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "smlab/amnesia.hpp"
#include "smlab/deferred_acceptance.hpp"
#include "smlab/rng.hpp"

namespace smlab {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Explicit:
      return "explicit";
    case Mode::Amnesia:
      return "amnesia";
    case Mode::Auto:
      return "auto";
  }
  return "auto";
}

Mode parse_mode(std::string_view text) {
  if (text == "explicit") return Mode::Explicit;
  if (text == "amnesia") return Mode::Amnesia;
  if (text == "auto") return Mode::Auto;
  throw std::invalid_argument("unknown mode '" + std::string(text) +
                              "' (expected explicit, amnesia or auto)");
}

void SweepConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  if (n_values.empty()) throw std::invalid_argument("no market sizes given");
  if (scenarios.empty()) throw std::invalid_argument("no scenarios given");
  for (Index n : n_values) {
    if (n == 0) throw std::invalid_argument("market size must be at least 1");
    if (mode == Mode::Explicit && n > kExplicitLimit && !force_explicit) {
      throw std::invalid_argument("explicit mode is limited to n <= " +
                                  std::to_string(kExplicitLimit) +
                                  " (n^2 memory); pass force to override");
    }
    for (const auto& s : scenarios) {
      if (s.strategic_woman >= n) throw std::invalid_argument("strategic woman out of range");
      if (s.effective_length() > n) {
        throw std::invalid_argument("truncation length " + std::to_string(s.list_length) +
                                    " exceeds n = " + std::to_string(n));
      }
    }
  }
  if (top_k && *top_k == 0) throw std::invalid_argument("top-k must be at least 1");
}

std::vector<Index> n_range(Index lo, Index hi, Index step) {
  if (lo == 0 || step == 0 || hi < lo) throw std::invalid_argument("invalid n range");
  std::vector<Index> out;
  for (std::uint64_t n = lo; n <= hi; n += step) out.push_back(static_cast<Index>(n));
  return out;
}

SweepConfig preset(std::string_view name, Index truncation_n) {
  SweepConfig c;
  c.name = std::string(name);
  c.n_values = n_range(100, 10000, 20);
  c.iterations = 100;
  if (name == "fig1") {
    c.scenarios = {StrategyScenario::truthful(), StrategyScenario::optimal()};
  } else if (name == "fig2" || name == "fig3" || name == "lemma2") {
    c.scenarios = {StrategyScenario::optimal()};
  } else if (name == "sweep-truncation") {
    const double ln = std::log(static_cast<double>(truncation_n));
    std::vector<Index> lengths = {
        1, static_cast<Index>(std::ceil(ln * ln)),
        static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(truncation_n)))), truncation_n};
    std::sort(lengths.begin(), lengths.end());
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
    for (Index len : lengths) c.scenarios.push_back(StrategyScenario::fixed(std::min(len, truncation_n)));
    c.n_values = {truncation_n};
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) +
                                "' (expected fig1, fig2, fig3, lemma2 or sweep-truncation)");
  }
  return c;
}

Index default_top_k(Index n) {
  return static_cast<Index>(std::ceil(std::pow(std::log(static_cast<double>(n)), 2.5)));
}

Mode resolve_mode(Mode mode, Index n) {
  if (mode != Mode::Auto) return mode;
  return n <= kAutoExplicitLimit ? Mode::Explicit : Mode::Amnesia;
}

std::uint64_t instance_seed(std::uint64_t master_seed, Index n, std::uint64_t iteration) {
  return derive_seed({master_seed, n, iteration});
}

namespace {

InstanceResult explicit_instance(Index n, const StrategyScenario& scenario, std::uint64_t seed,
                                 Index top_k) {
  const PreferenceProfile profile = generate_profile(n, seed);
  const DaResult truthful = men_propose_da(ReportedProfile(profile));
  const Matching woman_optimal = women_propose_da(profile);

  Matching matching;
  ProposalLedger ledger;
  switch (scenario.kind) {
    case StrategyScenario::Kind::Truthful:
      matching = truthful.matching;
      ledger = truthful.ledger;
      break;
    case StrategyScenario::Kind::OptimalTruncation: {
      auto r = rejection_process(profile, scenario.strategic_woman);
      matching = std::move(r.matching);
      ledger = std::move(r.ledger);
      break;
    }
    case StrategyScenario::Kind::FixedTruncation:
    case StrategyScenario::Kind::RejectAll: {
      auto r = men_propose_da(apply_scenario(profile, scenario));
      matching = std::move(r.matching);
      ledger = std::move(r.ledger);
      break;
    }
  }

  const RankReport report = rank_stats(profile, matching);
  InstanceResult out;
  out.avg_women_rank = report.avg_women_rank;
  out.avg_men_rank = report.avg_men_rank;
  out.g_rank = report.woman_rank[scenario.strategic_woman];
  out.frac_women_top_k = report.top_k_fraction(top_k);
  std::size_t best = 0, worst = 0, either = 0;
  for (Index w = 0; w < n; ++w) {
    const auto h = matching.husband_of(w);
    if (!h) continue;
    const bool b = woman_optimal.husband_of(w) == h;
    const bool s = truthful.matching.husband_of(w) == h;
    best += b;
    worst += s;
    either += b || s;
  }
  out.frac_best_stable = static_cast<double>(best) / n;
  out.frac_worst_stable = static_cast<double>(worst) / n;
  out.frac_best_or_worst = static_cast<double>(either) / n;
  out.total_proposals = ledger.total_proposals();
  out.redundant_proposals = ledger.redundant_proposals();
  out.max_repeat_proposals = ledger.max_repeats();
  return out;
}

InstanceResult amnesia_instance(Index n, const StrategyScenario& scenario, std::uint64_t seed,
                                Index top_k) {
  const SimOutcome sim = simulate_amnesia(n, scenario, seed);
  const RankReport report = make_rank_report(sim.man_ranks, sim.woman_ranks);
  InstanceResult out;
  out.avg_women_rank = report.avg_women_rank;
  out.avg_men_rank = report.avg_men_rank;
  out.g_rank = sim.g_rank;
  out.frac_women_top_k = report.top_k_fraction(top_k);
  const auto worst = std::count(sim.worst_stable.begin(), sim.worst_stable.end(), true);
  out.frac_worst_stable = static_cast<double>(worst) / n;
  if (sim.best_stable) {
    std::size_t best = 0, either = 0;
    for (Index w = 0; w < n; ++w) {
      best += (*sim.best_stable)[w];
      either += (*sim.best_stable)[w] || sim.worst_stable[w];
    }
    out.frac_best_stable = static_cast<double>(best) / n;
    out.frac_best_or_worst = static_cast<double>(either) / n;
  }
  out.total_proposals = sim.ledger.total_proposals();
  out.redundant_proposals = sim.ledger.redundant_proposals();
  out.max_repeat_proposals = sim.ledger.max_repeats();
  return out;
}

struct Moments {
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }
  double mean() const { return count ? sum / count : std::nan(""); }
  double stddev() const {
    if (count < 2) return count ? 0.0 : std::nan("");
    const double m = mean();
    return std::sqrt(std::max(0.0, (sum_sq - count * m * m) / (count - 1)));
  }
};

SweepRow reduce(const SweepConfig& config, Index n, const StrategyScenario& scenario,
                std::span<const RunRecord> runs, Index top_k) {
  SweepRow row;
  row.n = n;
  row.scenario = scenario.tag();
  row.mode = std::string(to_string(resolve_mode(config.mode, n)));
  row.iterations = config.iterations;
  row.master_seed = config.master_seed;
  row.top_k = top_k;
  row.ln_n = std::log(static_cast<double>(n));
  row.ln2_n = row.ln_n * row.ln_n;
  row.g_rank_threshold = 7.0 * row.ln2_n;

  Moments women, men, g_rank, top, best, worst, either, total, redundant, repeats;
  std::size_t within = 0, g_runs = 0;
  for (const RunRecord& r : runs) {
    const InstanceResult& x = r.result;
    women.add(x.avg_women_rank);
    men.add(x.avg_men_rank);
    if (x.g_rank) {
      g_rank.add(*x.g_rank);
      ++g_runs;
      within += *x.g_rank <= row.g_rank_threshold;
    }
    top.add(x.frac_women_top_k);
    if (x.frac_best_stable) best.add(*x.frac_best_stable);
    if (x.frac_best_or_worst) either.add(*x.frac_best_or_worst);
    worst.add(x.frac_worst_stable);
    total.add(static_cast<double>(x.total_proposals));
    redundant.add(static_cast<double>(x.redundant_proposals));
    repeats.add(x.max_repeat_proposals);
  }
  row.mean_avg_women_rank = women.mean();
  row.std_avg_women_rank = women.stddev();
  row.mean_avg_men_rank = men.mean();
  row.std_avg_men_rank = men.stddev();
  row.mean_g_rank = g_rank.mean();
  row.frac_women_top_k = top.mean();
  row.mean_frac_best_stable = best.mean();
  row.mean_frac_worst_stable = worst.mean();
  row.mean_frac_best_or_worst = either.mean();
  row.mean_total_proposals = total.mean();
  row.mean_redundant_proposals = redundant.mean();
  row.mean_max_repeat_proposals = repeats.mean();
  row.frac_g_within_threshold = g_runs ? static_cast<double>(within) / g_runs : std::nan("");
  row.best_stable_runs = best.count;
  return row;
}

}  // namespace

InstanceResult run_instance(Index n, const StrategyScenario& scenario, Mode mode,
                            std::uint64_t seed, Index top_k) {
  switch (mode) {
    case Mode::Explicit:
      return explicit_instance(n, scenario, seed, top_k);
    case Mode::Amnesia:
      return amnesia_instance(n, scenario, seed, top_k);
    case Mode::Auto:
      break;
  }
  return run_instance(n, scenario, resolve_mode(mode, n), seed, top_k);
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  const std::size_t per_cell = config.iterations;
  const std::size_t cells = config.n_values.size() * config.scenarios.size();
  const std::size_t tasks = cells * per_cell;

  SweepResult result;
  result.runs.resize(tasks);
  for (std::size_t t = 0; t < tasks; ++t) {
    const std::size_t cell = t / per_cell;
    RunRecord& r = result.runs[t];
    r.n = config.n_values[cell / config.scenarios.size()];
    r.scenario = config.scenarios[cell % config.scenarios.size()].tag();
    r.iteration = t % per_cell;
    r.seed = instance_seed(config.master_seed, r.n, r.iteration);
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      const std::size_t cell = t / per_cell;
      const StrategyScenario& s = config.scenarios[cell % config.scenarios.size()];
      RunRecord& r = result.runs[t];
      try {
        const Index k = config.top_k.value_or(default_top_k(r.n));
        r.result = run_instance(r.n, s, resolve_mode(config.mode, r.n), r.seed, k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks);
        return;
      }
    }
  };
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(
      std::min<std::size_t>(config.threads ? config.threads : hw, std::max<std::size_t>(tasks, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t cell = 0; cell < cells; ++cell) {
    const Index n = config.n_values[cell / config.scenarios.size()];
    const StrategyScenario& s = config.scenarios[cell % config.scenarios.size()];
    const std::span<const RunRecord> runs(result.runs.data() + cell * per_cell, per_cell);
    result.rows.push_back(reduce(config, n, s, runs, config.top_k.value_or(default_top_k(n))));
  }
  return result;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "n",
      "scenario",
      "mode",
      "iterations",
      "master_seed",
      "mean_avg_women_rank",
      "std_avg_women_rank",
      "mean_avg_men_rank",
      "std_avg_men_rank",
      "mean_g_rank",
      "frac_women_top_k",
      "mean_frac_best_stable",
      "mean_frac_worst_stable",
      "mean_frac_best_or_worst",
      "mean_total_proposals",
      "mean_redundant_proposals",
      "mean_max_repeat_proposals",
      "top_k",
      "ln_n",
      "ln2_n",
      "g_rank_threshold",
      "frac_g_within_threshold",
      "best_stable_runs",
  };
  return columns;
}

namespace {

// Shortest round-trip text, independent of the global locale.
std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

template <typename Int>
std::string fmt_int(Int x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string join_scenarios(const SweepConfig& c) {
  std::string out;
  for (const auto& s : c.scenarios) out += (out.empty() ? "" : ";") + s.tag();
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const SweepConfig& config, const std::vector<SweepRow>& rows,
               bool with_timestamp) {
  const Index lo = *std::min_element(config.n_values.begin(), config.n_values.end());
  const Index hi = *std::max_element(config.n_values.begin(), config.n_values.end());
  out << "# smlab sweep, version " << kVersion << '\n';
  out << "# rng: " << kRngAlgorithm << '\n';
  out << "# config: name=" << config.name << " n_count=" << config.n_values.size()
      << " n_min=" << lo << " n_max=" << hi << " iterations=" << config.iterations
      << " scenarios=" << join_scenarios(config) << " mode=" << to_string(config.mode)
      << " master_seed=" << config.master_seed << " top_k="
      << (config.top_k ? fmt_int(*config.top_k) : std::string("ceil(ln(n)^2.5)"))
      << " seed_derivation=derive_seed(master_seed,n,iteration)\n";
  if (with_timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# created: " << stamp << '\n';
  }
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const SweepRow& r : rows) {
    out << r.n << ',' << r.scenario << ',' << r.mode << ',' << r.iterations << ','
        << fmt_int(r.master_seed) << ',' << fmt(r.mean_avg_women_rank) << ','
        << fmt(r.std_avg_women_rank) << ',' << fmt(r.mean_avg_men_rank) << ','
        << fmt(r.std_avg_men_rank) << ',' << fmt(r.mean_g_rank) << ',' << fmt(r.frac_women_top_k)
        << ',' << fmt(r.mean_frac_best_stable) << ',' << fmt(r.mean_frac_worst_stable) << ','
        << fmt(r.mean_frac_best_or_worst) << ',' << fmt(r.mean_total_proposals) << ','
        << fmt(r.mean_redundant_proposals) << ',' << fmt(r.mean_max_repeat_proposals) << ','
        << r.top_k << ',' << fmt(r.ln_n) << ',' << fmt(r.ln2_n) << ',' << fmt(r.g_rank_threshold)
        << ',' << fmt(r.frac_g_within_threshold) << ',' << r.best_stable_runs << '\n';
  }
}

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
  out << "n,scenario,iteration,seed,avg_women_rank,avg_men_rank,g_rank,frac_women_top_k,"
         "frac_best_stable,frac_worst_stable,frac_best_or_worst,total_proposals,"
         "redundant_proposals,max_repeat_proposals\n";
  const auto opt = [](const auto& v) { return v ? fmt(static_cast<double>(*v)) : std::string("nan"); };
  for (const RunRecord& r : runs) {
    const InstanceResult& x = r.result;
    out << r.n << ',' << r.scenario << ',' << r.iteration << ',' << fmt_int(r.seed) << ','
        << fmt(x.avg_women_rank) << ',' << fmt(x.avg_men_rank) << ',' << opt(x.g_rank) << ','
        << fmt(x.frac_women_top_k) << ',' << opt(x.frac_best_stable) << ','
        << fmt(x.frac_worst_stable) << ',' << opt(x.frac_best_or_worst) << ','
        << x.total_proposals << ',' << x.redundant_proposals << ',' << x.max_repeat_proposals
        << '\n';
  }
}

SweepResult run_sweep_to_file(const SweepConfig& config) {
  config.validate();
  std::ofstream out(config.output_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file '" + config.output_path + "'");
  SweepResult result = run_sweep(config);
  write_csv(out, config, result.rows);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + config.output_path + "'");
  return result;
}

}  // namespace smlab
