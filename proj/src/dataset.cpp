#include "alh/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "alh/rng.hpp"

namespace alh {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(trim(field));
  if (!line.empty() && line.back() == delim) out.push_back("");
  return out;
}

std::vector<std::string> sorted_class_list(
    const std::vector<std::string>& labels) {
  std::set<std::string> distinct(labels.begin(), labels.end());
  std::vector<std::string> cls(distinct.begin(), distinct.end());
  bool numeric = true;
  std::vector<double> value(cls.size());
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (!parse_double(cls[i], value[i]) || !std::isfinite(value[i])) {
      numeric = false;
      break;
    }
  }
  if (numeric) {
    std::vector<std::size_t> order(cls.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (value[a] != value[b]) return value[a] < value[b];
      return cls[a] < cls[b];
    });
    std::vector<std::string> out(cls.size());
    for (std::size_t i = 0; i < cls.size(); ++i) out[i] = cls[order[i]];
    return out;
  }
  return cls;  // std::set already sorted lexicographically
}

void validate(Dataset& ds, const std::string& path) {
  if (ds.n() < 2)
    throw std::runtime_error(path + ": fewer than 2 data rows");
  ds.class_list = sorted_class_list(ds.labels);
  if (ds.c() < 2)
    throw std::runtime_error(path + ": fewer than 2 distinct classes");
  if (ds.d() < 1) throw std::runtime_error(path + ": no feature columns");
  ds.name = std::filesystem::path(path).stem().string();
}

[[noreturn]] void parse_error(const std::string& path, int line,
                              const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::string line;
  int line_no = 0;
  int d = -1;
  bool first_content = true;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() < 2)
      parse_error(path, line_no, "expected at least one feature and a label");

    if (first_content) {
      first_content = false;
      bool header = false;
      double v;
      for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
        if (!parse_double(fields[j], v)) {
          header = true;
          break;
        }
      }
      if (header) continue;
      d = static_cast<int>(fields.size()) - 1;
    }
    if (d < 0) d = static_cast<int>(fields.size()) - 1;

    if (static_cast<int>(fields.size()) != d + 1)
      parse_error(path, line_no,
                  "expected " + std::to_string(d + 1) + " fields, got " +
                      std::to_string(fields.size()));
    std::vector<double> row(d);
    for (int j = 0; j < d; ++j) {
      if (!parse_double(fields[j], row[j]) || !std::isfinite(row[j]))
        parse_error(path, line_no,
                    "non-numeric feature value '" + fields[j] + "'");
    }
    rows.push_back(std::move(row));
    labels.push_back(fields.back());
  }

  Dataset ds;
  ds.features.resize(static_cast<int>(rows.size()), std::max(d, 0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < d; ++j) ds.features(static_cast<int>(i), j) = rows[i][j];
  ds.labels = std::move(labels);
  validate(ds, path);
  return ds;
}

Dataset load_sparse(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<std::string> labels;
  std::string line;
  int line_no = 0;
  int d = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::istringstream ss(line);
    std::string token;
    if (!(ss >> token)) continue;
    labels.push_back(token);
    std::vector<std::pair<int, double>> row;
    int prev = 0;
    while (ss >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0 ||
          colon + 1 == token.size())
        parse_error(path, line_no, "expected idx:val, got '" + token + "'");
      double idx_d, val;
      if (!parse_double(token.substr(0, colon), idx_d) ||
          idx_d != std::floor(idx_d))
        parse_error(path, line_no, "bad feature index in '" + token + "'");
      const int idx = static_cast<int>(idx_d);
      if (!parse_double(token.substr(colon + 1), val) || !std::isfinite(val))
        parse_error(path, line_no, "bad feature value in '" + token + "'");
      if (idx < 1)
        parse_error(path, line_no, "feature index must be >= 1");
      if (idx <= prev)
        parse_error(path, line_no, "feature indices must be increasing");
      prev = idx;
      d = std::max(d, idx);
      row.emplace_back(idx, val);
    }
    rows.push_back(std::move(row));
  }

  Dataset ds;
  ds.features = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [idx, val] : rows[i])
      ds.features(static_cast<int>(i), idx - 1) = val;
  ds.labels = std::move(labels);
  validate(ds, path);
  return ds;
}

LabelMatrix encode_labels(const std::vector<std::string>& labels,
                          const std::vector<std::string>& class_list) {
  std::unordered_map<std::string, int> pos;
  for (std::size_t k = 0; k < class_list.size(); ++k)
    pos[class_list[k]] = static_cast<int>(k);
  std::vector<int> positions(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = pos.find(labels[i]);
    if (it == pos.end())
      throw std::invalid_argument("label '" + labels[i] +
                                  "' not in class list");
    positions[i] = it->second;
  }
  return label_matrix_from_positions(positions,
                                     static_cast<int>(class_list.size()));
}

LabelMatrix label_matrix_from_positions(const std::vector<int>& positions,
                                        int c) {
  LabelMatrix Y = -LabelMatrix::Ones(static_cast<int>(positions.size()), c);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 0 || positions[i] >= c)
      throw std::invalid_argument("class position out of range");
    Y(static_cast<int>(i), positions[i]) = 1.0;
  }
  return Y;
}

std::vector<int> class_positions(const Dataset& ds) {
  std::unordered_map<std::string, int> pos;
  for (std::size_t k = 0; k < ds.class_list.size(); ++k)
    pos[ds.class_list[k]] = static_cast<int>(k);
  std::vector<int> out(ds.labels.size());
  for (std::size_t i = 0; i < ds.labels.size(); ++i)
    out[i] = pos.at(ds.labels[i]);
  return out;
}

Split split(const Dataset& ds, const SplitSpec& spec) {
  if (spec.pool_fraction <= 0.0 || spec.pool_fraction >= 1.0)
    throw std::invalid_argument("pool_fraction must be in (0, 1)");
  if (spec.init_per_class < 0)
    throw std::invalid_argument("init_per_class must be >= 0");
  const int n = ds.n();
  const int p = static_cast<int>(std::floor(spec.pool_fraction * n));
  if (spec.init_per_class >= 1 && p < ds.c())
    throw std::invalid_argument("pool too small to seed every class");

  const auto positions = class_positions(ds);
  for (int attempt = 0; attempt <= 100; ++attempt) {
    Rng rng(Rng::derive(spec.seed, static_cast<std::uint64_t>(attempt)));
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);

    Split out;
    out.pool.assign(perm.begin(), perm.begin() + p);
    out.test.assign(perm.begin() + p, perm.end());
    if (spec.init_per_class == 0) return out;

    std::vector<std::vector<int>> by_class(ds.c());
    for (int row : out.pool) by_class[positions[row]].push_back(row);
    bool feasible = true;
    for (const auto& members : by_class)
      if (static_cast<int>(members.size()) < spec.init_per_class)
        feasible = false;
    if (!feasible) continue;  // retry with the next derived seed

    for (auto& members : by_class) {
      // partial Fisher-Yates: first init_per_class entries are the draw
      for (int i = 0; i < spec.init_per_class; ++i) {
        const int j = i + static_cast<int>(rng.below(members.size() - i));
        std::swap(members[i], members[j]);
        out.initial_labeled.push_back(members[i]);
      }
    }
    return out;
  }
  throw std::runtime_error(
      "could not seed every class after 100 split retries");
}

void rescale_unit(Eigen::MatrixXd& features) {
  for (int j = 0; j < features.cols(); ++j) {
    const double lo = features.col(j).minCoeff();
    const double hi = features.col(j).maxCoeff();
    if (hi > lo)
      features.col(j) = (features.col(j).array() - lo) / (hi - lo);
    else
      features.col(j).setZero();
  }
}

}  // namespace alh
