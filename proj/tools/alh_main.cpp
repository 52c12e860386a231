#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "alh/harness.hpp"

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// key = value lines; '#' starts a comment; keys mirror the long flag names.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": empty key");
    if (!kv.emplace(key, value).second)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": duplicate key '" + key + "'");
  }
  return kv;
}

int parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size())
    throw std::runtime_error("config key '" + key + "': bad integer '" +
                             value + "'");
  return static_cast<int>(v);
}

double parse_real(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size())
    throw std::runtime_error("config key '" + key + "': bad number '" + value +
                             "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::runtime_error("config key '" + key + "': bad boolean '" + value +
                           "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pool-based active-learning experiments"};
  app.require_subcommand(1);

  alh::RunConfig config;
  double gamma = 0.0;
  std::string config_path;

  CLI::App* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("--config", config_path,
                  "Config file of key = value lines; flags override");
  run->add_option("--data", config.data_path, "Dataset file");
  run->add_option("--format", config.format, "Input format")
      ->check(CLI::IsMember({"csv", "sparse"}))
      ->capture_default_str();
  run->add_option("--strategy", config.strategy, "Query strategy")
      ->check(CLI::IsMember({"iral", "random", "margin", "mmd"}));
  run->add_option("--budget", config.budget, "Queries per run");
  run->add_option("--runs", config.runs, "Repeated runs")->capture_default_str();
  run->add_option("--seed", config.seed, "Base seed; run r uses seed + r");
  run->add_option("--beta", config.hp.beta, "Representative/informative weight")
      ->capture_default_str();
  run->add_option("--lambda", config.hp.lambda, "Regularization weight")
      ->capture_default_str();
  run->add_option("--rho", config.hp.rho, "Splitting penalty")
      ->capture_default_str();
  CLI::Option* gamma_opt =
      run->add_option("--gamma", gamma, "Kernel bandwidth (default 1/d)");
  run->add_option("--init-per-class", config.init_per_class,
                  "Initially labeled points per class")
      ->capture_default_str();
  run->add_flag("--rescale", config.rescale,
                "Min-max rescale every feature to [0, 1]");
  run->add_flag("--beta-sweep", config.beta_sweep,
                "Sweep beta over 1, 2, 10, 100, 1000 (iral only)");
  run->add_option("--out", config.out_dir, "Output directory");

  std::string out_dir, strategy_a, strategy_b;
  CLI::App* compare =
      app.add_subcommand("compare", "Paired t-test between two strategies");
  compare->add_option("--out", out_dir, "Directory holding curves.csv")
      ->required();
  compare->add_option("--a", strategy_a, "First strategy")->required();
  compare->add_option("--b", strategy_b, "Second strategy")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!run->parsed()) return alh::cli_compare(out_dir, strategy_a, strategy_b);

    bool seed_given = run->count("--seed") > 0;
    bool budget_given = run->count("--budget") > 0;
    bool strategy_given = run->count("--strategy") > 0;
    if (!config_path.empty()) {
      // command-line flags beat the file: apply a key only when its flag is absent
      for (const auto& [key, value] : read_config(config_path)) {
        const std::string flag = "--" + key;
        if (run->get_option_no_throw(flag) == nullptr || key == "config")
          throw std::runtime_error("config key '" + key + "' is not a flag");
        if (run->count(flag) > 0) continue;
        if (key == "data") config.data_path = value;
        else if (key == "format") config.format = value;
        else if (key == "strategy") {
          config.strategy = value;
          strategy_given = true;
        } else if (key == "budget") {
          config.budget = parse_int(key, value);
          budget_given = true;
        } else if (key == "runs") config.runs = parse_int(key, value);
        else if (key == "seed") {
          config.seed = static_cast<std::uint64_t>(
              std::strtoull(value.c_str(), nullptr, 10));
          seed_given = true;
        } else if (key == "beta") config.hp.beta = parse_real(key, value);
        else if (key == "lambda") config.hp.lambda = parse_real(key, value);
        else if (key == "rho") config.hp.rho = parse_real(key, value);
        else if (key == "gamma") config.gamma = parse_real(key, value);
        else if (key == "init-per-class") config.init_per_class = parse_int(key, value);
        else if (key == "rescale") config.rescale = parse_bool(key, value);
        else if (key == "beta-sweep") config.beta_sweep = parse_bool(key, value);
        else config.out_dir = value;  // "out"
      }
    }
    if (config.data_path.empty()) throw std::runtime_error("--data is required");
    if (!strategy_given) throw std::runtime_error("--strategy is required");
    if (!budget_given) throw std::runtime_error("--budget is required");
    if (!seed_given) throw std::runtime_error("--seed is required");
    if (config.out_dir.empty()) throw std::runtime_error("--out is required");
    if (config.format != "csv" && config.format != "sparse")
      throw std::runtime_error("unknown format '" + config.format + "'");
    if (gamma_opt->count() > 0) config.gamma = gamma;
    return alh::cli_run(config);
  } catch (const std::exception& e) {
    std::cerr << "alh: " << e.what() << '\n';
    return 1;
  }
}
