// Monte Carlo sweeps over market sizes and scenarios, aggregated into CSV rows.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smlab/model.hpp"
#include "smlab/strategy.hpp"

namespace smlab {

inline constexpr std::string_view kVersion = "1.0.0";

enum class Mode { Explicit, Amnesia, Auto };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Auto mode uses explicit profiles up to this size.
inline constexpr Index kAutoExplicitLimit = 500;
/// Explicit mode refuses larger markets unless forced (n^2 rank tables).
inline constexpr Index kExplicitLimit = 5000;

struct SweepConfig {
  std::string name = "custom";
  std::vector<Index> n_values;
  std::size_t iterations = 100;
  std::vector<StrategyScenario> scenarios;
  Mode mode = Mode::Auto;
  std::uint64_t master_seed = 1;
  std::optional<Index> top_k;  // default: ceil(ln(n)^2.5) per n
  bool force_explicit = false;
  unsigned threads = 0;  // 0: one per hardware thread
  std::string output_path;

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

/// lo, lo + step, ... up to and including hi.
std::vector<Index> n_range(Index lo, Index hi, Index step);

/// Named configurations: fig1, fig2, fig3, lemma2, sweep-truncation. The
/// truncation sweep runs at the single size `truncation_n`.
/// Throws std::invalid_argument for an unknown name.
SweepConfig preset(std::string_view name, Index truncation_n = 10000);

Index default_top_k(Index n);
Mode resolve_mode(Mode mode, Index n);

/// Seed of one instance. The scenario is deliberately not an input, so all
/// scenarios of a cell see the same market.
std::uint64_t instance_seed(std::uint64_t master_seed, Index n, std::uint64_t iteration);

/// Per-instance statistics under true preferences.
struct InstanceResult {
  double avg_women_rank = 0.0;
  double avg_men_rank = 0.0;
  std::optional<Index> g_rank;
  double frac_women_top_k = 0.0;
  std::optional<double> frac_best_stable;
  double frac_worst_stable = 0.0;
  std::optional<double> frac_best_or_worst;
  std::uint64_t total_proposals = 0;
  std::uint64_t redundant_proposals = 0;
  std::uint32_t max_repeat_proposals = 0;
};

/// One instance in a resolved mode (Explicit or Amnesia).
InstanceResult run_instance(Index n, const StrategyScenario& scenario, Mode mode,
                            std::uint64_t seed, Index top_k);

struct RunRecord {
  Index n = 0;
  std::string scenario;
  std::size_t iteration = 0;
  std::uint64_t seed = 0;
  InstanceResult result;
};

struct SweepRow {
  Index n = 0;
  std::string scenario;
  std::string mode;
  std::size_t iterations = 0;
  std::uint64_t master_seed = 0;
  double mean_avg_women_rank = 0.0;
  double std_avg_women_rank = 0.0;
  double mean_avg_men_rank = 0.0;
  double std_avg_men_rank = 0.0;
  double mean_g_rank = 0.0;
  double frac_women_top_k = 0.0;
  double mean_frac_best_stable = 0.0;
  double mean_frac_worst_stable = 0.0;
  double mean_frac_best_or_worst = 0.0;
  double mean_total_proposals = 0.0;
  double mean_redundant_proposals = 0.0;
  double mean_max_repeat_proposals = 0.0;
  // Reference values and the g-rank threshold indicator.
  Index top_k = 0;
  double ln_n = 0.0;
  double ln2_n = 0.0;
  double g_rank_threshold = 0.0;  // 7 ln(n)^2
  double frac_g_within_threshold = 0.0;
  std::size_t best_stable_runs = 0;  // runs where best-stable flags were available
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<RunRecord> runs;  // index order: n, scenario, iteration
};

/// Runs every (n, scenario, iteration) instance on a worker pool and reduces
/// in index order, so the result does not depend on the thread count.
SweepResult run_sweep(const SweepConfig& config);

/// Column names, in CSV order.
const std::vector<std::string>& csv_columns();

/// Writes "#"-prefixed metadata lines, a header and one line per row. The
/// "# created:" line is the only one that varies between identical runs.
void write_csv(std::ostream& out, const SweepConfig& config, const std::vector<SweepRow>& rows,
               bool with_timestamp = true);

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs);

/// Validates, opens `config.output_path` before any work, runs and writes.
/// Throws std::runtime_error when the path cannot be written.
SweepResult run_sweep_to_file(const SweepConfig& config);

}  // namespace smlab
