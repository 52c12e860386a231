#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alh/dataset.hpp"
#include "alh/informative.hpp"
#include "alh/kernel.hpp"
#include "alh/rng.hpp"
#include "alh/state.hpp"
#include "alh/stats.hpp"

namespace alh {

struct RunConfig {
  std::string data_path;
  std::string format = "csv";     // csv | sparse
  std::string strategy = "iral";  // iral | random | margin | mmd
  std::string strategy_label;     // curve label; defaults to strategy
  int budget = 0;
  int runs = 10;
  std::uint64_t seed = 0;
  HyperParams hp;
  std::optional<double> gamma;  // kernel bandwidth; default 1/d
  int init_per_class = 0;
  bool rescale = false;
  bool beta_sweep = false;
  double pool_fraction = 0.6;
  std::string out_dir;
};

struct CurvePoint {
  std::string strategy;
  int run = 0;
  int query_index = 0;   // 0 is the initial point, before any query
  int n_labeled = 0;
  int selected_pool_index = -1;  // dataset row of the queried instance
  double accuracy = 0.0;
};

struct SummaryRow {
  std::string strategy;
  int query_index = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
};

struct TTestRow {
  std::string strategy_a;
  std::string strategy_b;
  int query_index = 0;
  double t_stat = 0.0;
  double p_value = 1.0;
  Outcome outcome = Outcome::tie;
};

// Dispatches one query to the named strategy; returns a position in
// state.unlabeled. Only "random" (and "margin" before any label exists)
// consumes the rng.
int select_query(const std::string& strategy, const ActiveState& state,
                 const GramCache& gram, const LabelMatrix& Y_L,
                 const HyperParams& hp, Rng& rng);

// Runs the full query loop for every run r with seed seed + r: split, select,
// reveal, refit, score. Emits one curve point per (run, query_index).
std::vector<CurvePoint> run_experiment(const RunConfig& config);

// Per (strategy, query_index) mean and sample standard deviation across runs.
std::vector<SummaryRow> summarize(const std::vector<CurvePoint>& curves);

// Paired t-test of strategy a against b at every query index, paired by run.
std::vector<TTestRow> compare_strategies(const std::vector<CurvePoint>& curves,
                                         const std::string& a,
                                         const std::string& b,
                                         double level = 0.95);

// Writes curves.csv, summary.csv and ttest.csv, sorted and with floats at 9
// significant digits, so identical inputs give identical bytes.
void write_outputs(const std::vector<CurvePoint>& curves,
                   const std::vector<SummaryRow>& summaries,
                   const std::vector<TTestRow>& tests,
                   const std::string& directory);

std::vector<CurvePoint> read_curves(const std::string& path);
std::vector<TTestRow> read_ttests(const std::string& path);

// CLI entry points; the alh binary is a flag parser around these.
int cli_run(const RunConfig& config);
int cli_compare(const std::string& out_dir, const std::string& a,
                const std::string& b);

std::string format_float(double v);  // 9 significant digits

}  // namespace alh
