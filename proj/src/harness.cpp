#include "alh/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <utility>

#include "alh/iral.hpp"
#include "alh/learner.hpp"

namespace fs = std::filesystem;

namespace alh {
namespace {

const char* kCurvesHeader =
    "strategy,run,query_index,n_labeled,selected_pool_index,accuracy";
const char* kSummaryHeader = "strategy,query_index,mean_accuracy,std_accuracy";
const char* kTTestHeader =
    "strategy_a,strategy_b,query_index,t_stat,p_value,outcome";

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& m, const std::vector<int>& rows) {
  Eigen::MatrixXd out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = m.row(rows[i]);
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_int(const std::string& s, const std::string& path, int lineno) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::runtime_error(path + ":" + std::to_string(lineno) +
                             ": bad integer '" + s + "'");
  return static_cast<int>(v);
}

double parse_real(const std::string& s, const std::string& path, int lineno) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::runtime_error(path + ":" + std::to_string(lineno) +
                             ": bad number '" + s + "'");
  return v;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Returns false when the file does not exist; header mismatch is an error.
bool open_table(const std::string& path, std::ifstream& in,
                const char* header) {
  in.open(path, std::ios::binary);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line)) return false;
  strip_cr(line);
  if (line != header)
    throw std::runtime_error(path + ": unrecognized header '" + line + "'");
  return true;
}

int margin_select(const ActiveState& state, const GramCache& cache,
                  const LabelMatrix& Y_L, const HyperParams& hp) {
  const FittedModel model =
      fit(cache.block(state.labeled, state.labeled), Y_L, hp.lambda);
  const Eigen::MatrixXd scores =
      class_scores(model.theta, cache.block(state.labeled, state.unlabeled));
  int best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < scores.cols(); ++j) {
    double top = -std::numeric_limits<double>::infinity();
    double second = top;
    for (int k = 0; k < scores.rows(); ++k) {
      const double v = scores(k, j);
      if (v > top) {
        second = top;
        top = v;
      } else if (v > second) {
        second = v;
      }
    }
    const double gap = top - second;
    if (gap < best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  return best;
}

Outcome parse_outcome(const std::string& s, const std::string& path,
                      int lineno) {
  if (s == "win") return Outcome::win;
  if (s == "tie") return Outcome::tie;
  if (s == "loss") return Outcome::loss;
  throw std::runtime_error(path + ":" + std::to_string(lineno) +
                           ": bad outcome '" + s + "'");
}

}  // namespace

int select_query(const std::string& strategy, const ActiveState& state,
                 const GramCache& gram, const LabelMatrix& Y_L,
                 const HyperParams& hp, Rng& rng) {
  if (state.u() < 1)
    throw std::invalid_argument("select_query: empty unlabeled pool");
  if (strategy == "random")
    return static_cast<int>(rng.below(static_cast<std::uint64_t>(state.u())));
  if (strategy == "margin") {
    if (state.l() == 0)
      return static_cast<int>(
          rng.below(static_cast<std::uint64_t>(state.u())));
    return margin_select(state, gram, Y_L, hp);
  }
  if (strategy == "mmd") {
    // Representative-only: rank the current pool as if nothing were labeled.
    ActiveState view;
    view.unlabeled = state.unlabeled;
    return cold_start_select(view, gram, hp).pool_relative_index;
  }
  if (strategy == "iral")
    return select_query_iral(state, Y_L, gram, hp).pool_relative_index;
  throw std::invalid_argument("select_query: unknown strategy '" + strategy +
                              "'");
}

std::vector<CurvePoint> run_experiment(const RunConfig& config) {
  if (config.budget < 0)
    throw std::invalid_argument("run_experiment: budget must be >= 0");
  if (config.runs < 1)
    throw std::invalid_argument("run_experiment: runs must be >= 1");
  if (config.init_per_class < 0)
    throw std::invalid_argument("run_experiment: init_per_class must be >= 0");
  if (!(config.pool_fraction > 0.0) || !(config.pool_fraction < 1.0))
    throw std::invalid_argument(
        "run_experiment: pool fraction outside (0, 1)");
  static const std::set<std::string> known = {"iral", "random", "margin",
                                              "mmd"};
  if (known.find(config.strategy) == known.end())
    throw std::invalid_argument("run_experiment: unknown strategy '" +
                                config.strategy + "'");

  Dataset ds;
  if (config.format == "csv") {
    ds = load_csv(config.data_path);
  } else if (config.format == "sparse") {
    ds = load_sparse(config.data_path);
  } else {
    throw std::invalid_argument("run_experiment: unknown format '" +
                                config.format + "'");
  }
  if (config.rescale) rescale_unit(ds.features);

  const int n = ds.n();
  const int c = ds.c();
  const double gamma = config.gamma ? *config.gamma : 1.0 / ds.d();
  if (!(gamma > 0.0))
    throw std::invalid_argument("run_experiment: gamma must be > 0");

  const int pool_size =
      static_cast<int>(std::floor(config.pool_fraction * n));
  if (config.init_per_class * c + config.budget > pool_size)
    throw std::invalid_argument(
        "run_experiment: budget plus initial labels exceeds the pool");
  if (n - pool_size < 1)
    throw std::invalid_argument("run_experiment: empty test set");

  const std::vector<int> positions = class_positions(ds);
  const std::string label =
      config.strategy_label.empty() ? config.strategy : config.strategy_label;

  std::vector<CurvePoint> curves;
  for (int r = 0; r < config.runs; ++r) {
    const std::uint64_t seed_r =
        config.seed + static_cast<std::uint64_t>(r);
    SplitSpec spec;
    spec.pool_fraction = config.pool_fraction;
    spec.seed = seed_r;
    spec.init_per_class = config.init_per_class;
    const Split sp = split(ds, spec);

    const Eigen::MatrixXd pool_x = rows_of(ds.features, sp.pool);
    const Eigen::MatrixXd test_x = rows_of(ds.features, sp.test);
    const GramCache cache(pool_x, gamma);
    const Eigen::MatrixXd pool_test_k = gram(pool_x, test_x, gamma);

    std::vector<int> truth(sp.test.size());
    for (std::size_t i = 0; i < sp.test.size(); ++i)
      truth[i] = positions[sp.test[i]];

    std::unordered_map<int, int> pool_pos;
    for (std::size_t i = 0; i < sp.pool.size(); ++i)
      pool_pos[sp.pool[i]] = static_cast<int>(i);

    ActiveState state;
    std::vector<char> taken(sp.pool.size(), 0);
    for (int row : sp.initial_labeled) {
      const int p = pool_pos.at(row);
      state.labeled.push_back(p);
      state.revealed.push_back(positions[row]);
      taken[p] = 1;
    }
    for (std::size_t i = 0; i < sp.pool.size(); ++i)
      if (!taken[i]) state.unlabeled.push_back(static_cast<int>(i));

    Rng rng(Rng::derive(seed_r, 1000003));

    auto score_now = [&]() {
      const LabelMatrix Y = label_matrix_from_positions(state.revealed, c);
      const FittedModel model =
          fit(cache.block(state.labeled, state.labeled), Y, config.hp.lambda);
      return accuracy(predict(model, rows_of(pool_test_k, state.labeled)),
                      truth);
    };

    CurvePoint first;
    first.strategy = label;
    first.run = r;
    first.query_index = 0;
    first.n_labeled = state.l();
    first.selected_pool_index = -1;
    first.accuracy = state.l() == 0 ? 1.0 / c : score_now();
    curves.push_back(first);

    for (int t = 1; t <= config.budget; ++t) {
      const LabelMatrix Y = label_matrix_from_positions(state.revealed, c);
      const int rel =
          select_query(config.strategy, state, cache, Y, config.hp, rng);
      if (rel < 0 || rel >= state.u())
        throw std::logic_error("run_experiment: selection out of range");
      const int pos = state.unlabeled[rel];
      const int row = sp.pool[pos];
      state.labeled.push_back(pos);
      state.revealed.push_back(positions[row]);
      state.unlabeled.erase(state.unlabeled.begin() + rel);

      CurvePoint cp;
      cp.strategy = label;
      cp.run = r;
      cp.query_index = t;
      cp.n_labeled = state.l();
      cp.selected_pool_index = row;
      cp.accuracy = score_now();
      curves.push_back(cp);
    }
  }
  return curves;
}

std::vector<SummaryRow> summarize(const std::vector<CurvePoint>& curves) {
  std::map<std::pair<std::string, int>, std::vector<double>> groups;
  for (const CurvePoint& cp : curves)
    groups[{cp.strategy, cp.query_index}].push_back(cp.accuracy);
  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (const auto& [key, accs] : groups) {
    SummaryRow row;
    row.strategy = key.first;
    row.query_index = key.second;
    row.mean_accuracy = mean(accs);
    row.std_accuracy = sample_std(accs);
    out.push_back(row);
  }
  return out;
}

std::vector<TTestRow> compare_strategies(const std::vector<CurvePoint>& curves,
                                         const std::string& a,
                                         const std::string& b, double level) {
  if (a == b)
    throw std::invalid_argument(
        "compare_strategies: need two distinct strategies");
  std::map<int, std::map<int, double>> by_query_a, by_query_b;
  for (const CurvePoint& cp : curves) {
    if (cp.strategy == a)
      by_query_a[cp.query_index][cp.run] = cp.accuracy;
    else if (cp.strategy == b)
      by_query_b[cp.query_index][cp.run] = cp.accuracy;
  }
  if (by_query_a.empty())
    throw std::runtime_error("compare_strategies: no curves for '" + a + "'");
  if (by_query_b.empty())
    throw std::runtime_error("compare_strategies: no curves for '" + b + "'");

  std::vector<TTestRow> out;
  for (const auto& [q, runs_a] : by_query_a) {
    const auto it = by_query_b.find(q);
    if (it == by_query_b.end()) continue;
    std::vector<double> va, vb;
    for (const auto& [run, acc] : runs_a) {
      const auto jt = it->second.find(run);
      if (jt != it->second.end()) {
        va.push_back(acc);
        vb.push_back(jt->second);
      }
    }
    if (va.size() < 2)
      throw std::runtime_error(
          "compare_strategies: fewer than 2 paired runs at query index " +
          std::to_string(q));
    const TTestResult t = paired_t_test(va, vb, level);
    TTestRow row;
    row.strategy_a = a;
    row.strategy_b = b;
    row.query_index = q;
    row.t_stat = t.t;
    row.p_value = t.p;
    row.outcome = t.outcome;
    out.push_back(row);
  }
  return out;
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_outputs(const std::vector<CurvePoint>& curves,
                   const std::vector<SummaryRow>& summaries,
                   const std::vector<TTestRow>& tests,
                   const std::string& directory) {
  fs::create_directories(directory);

  auto open = [&](const char* name, std::ofstream& out) {
    const std::string path = (fs::path(directory) / name).string();
    out.open(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_outputs: cannot open " + path);
    return path;
  };
  auto finish = [](std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("write_outputs: write failed at " + path);
  };

  std::vector<CurvePoint> cv = curves;
  std::sort(cv.begin(), cv.end(),
            [](const CurvePoint& x, const CurvePoint& y) {
              return std::tie(x.strategy, x.run, x.query_index) <
                     std::tie(y.strategy, y.run, y.query_index);
            });
  std::ofstream out;
  std::string path = open("curves.csv", out);
  out << kCurvesHeader << '\n';
  for (const CurvePoint& cp : cv)
    out << cp.strategy << ',' << cp.run << ',' << cp.query_index << ','
        << cp.n_labeled << ',' << cp.selected_pool_index << ','
        << format_float(cp.accuracy) << '\n';
  finish(out, path);
  out.close();

  std::vector<SummaryRow> sm = summaries;
  std::sort(sm.begin(), sm.end(),
            [](const SummaryRow& x, const SummaryRow& y) {
              return std::tie(x.strategy, x.query_index) <
                     std::tie(y.strategy, y.query_index);
            });
  path = open("summary.csv", out);
  out << kSummaryHeader << '\n';
  for (const SummaryRow& row : sm)
    out << row.strategy << ',' << row.query_index << ','
        << format_float(row.mean_accuracy) << ','
        << format_float(row.std_accuracy) << '\n';
  finish(out, path);
  out.close();

  std::vector<TTestRow> tt = tests;
  std::sort(tt.begin(), tt.end(), [](const TTestRow& x, const TTestRow& y) {
    return std::tie(x.strategy_a, x.strategy_b, x.query_index) <
           std::tie(y.strategy_a, y.strategy_b, y.query_index);
  });
  path = open("ttest.csv", out);
  out << kTTestHeader << '\n';
  for (const TTestRow& row : tt)
    out << row.strategy_a << ',' << row.strategy_b << ',' << row.query_index
        << ',' << format_float(row.t_stat) << ',' << format_float(row.p_value)
        << ',' << outcome_name(row.outcome) << '\n';
  finish(out, path);
}

std::vector<CurvePoint> read_curves(const std::string& path) {
  std::ifstream in;
  if (!open_table(path, in, kCurvesHeader)) return {};
  std::vector<CurvePoint> out;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> f = split_line(line);
    if (f.size() != 6)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 6 fields");
    CurvePoint cp;
    cp.strategy = f[0];
    cp.run = parse_int(f[1], path, lineno);
    cp.query_index = parse_int(f[2], path, lineno);
    cp.n_labeled = parse_int(f[3], path, lineno);
    cp.selected_pool_index = parse_int(f[4], path, lineno);
    cp.accuracy = parse_real(f[5], path, lineno);
    out.push_back(cp);
  }
  return out;
}

std::vector<TTestRow> read_ttests(const std::string& path) {
  std::ifstream in;
  if (!open_table(path, in, kTTestHeader)) return {};
  std::vector<TTestRow> out;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> f = split_line(line);
    if (f.size() != 6)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 6 fields");
    TTestRow row;
    row.strategy_a = f[0];
    row.strategy_b = f[1];
    row.query_index = parse_int(f[2], path, lineno);
    row.t_stat = parse_real(f[3], path, lineno);
    row.p_value = parse_real(f[4], path, lineno);
    row.outcome = parse_outcome(f[5], path, lineno);
    out.push_back(row);
  }
  return out;
}

int cli_run(const RunConfig& config) {
  if (config.out_dir.empty())
    throw std::invalid_argument("run: an output directory is required");
  if (config.beta_sweep && config.strategy != "iral")
    throw std::invalid_argument(
        "run: the beta sweep applies to the iral strategy only");

  std::vector<CurvePoint> fresh;
  std::set<std::string> produced;
  if (config.beta_sweep) {
    for (const double beta : {1.0, 2.0, 10.0, 100.0, 1000.0}) {
      RunConfig sweep = config;
      sweep.hp.beta = beta;
      char name[32];
      std::snprintf(name, sizeof name, "iral_beta%g", beta);
      sweep.strategy_label = name;
      const std::vector<CurvePoint> part = run_experiment(sweep);
      fresh.insert(fresh.end(), part.begin(), part.end());
      produced.insert(name);
    }
  } else {
    fresh = run_experiment(config);
    produced.insert(config.strategy_label.empty() ? config.strategy
                                                  : config.strategy_label);
  }

  const std::string curves_path =
      (fs::path(config.out_dir) / "curves.csv").string();
  const std::string ttest_path =
      (fs::path(config.out_dir) / "ttest.csv").string();

  std::vector<CurvePoint> merged;
  for (const CurvePoint& cp : read_curves(curves_path))
    if (produced.find(cp.strategy) == produced.end()) merged.push_back(cp);
  merged.insert(merged.end(), fresh.begin(), fresh.end());

  write_outputs(merged, summarize(merged), read_ttests(ttest_path),
                config.out_dir);
  return 0;
}

int cli_compare(const std::string& out_dir, const std::string& a,
                const std::string& b) {
  const std::string curves_path = (fs::path(out_dir) / "curves.csv").string();
  const std::string ttest_path = (fs::path(out_dir) / "ttest.csv").string();
  const std::vector<CurvePoint> curves = read_curves(curves_path);
  if (curves.empty())
    throw std::runtime_error("compare: no curves at " + curves_path);

  const std::vector<TTestRow> fresh = compare_strategies(curves, a, b);
  std::vector<TTestRow> merged;
  for (const TTestRow& row : read_ttests(ttest_path))
    if (!(row.strategy_a == a && row.strategy_b == b)) merged.push_back(row);
  merged.insert(merged.end(), fresh.begin(), fresh.end());

  write_outputs(curves, summarize(curves), merged, out_dir);
  return 0;
}

}  // namespace alh
