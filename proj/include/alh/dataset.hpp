#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace alh {

// Feature matrix plus raw class labels. class_list holds the distinct label
// tokens sorted ascending (numerically when every token parses as a number,
// lexicographically otherwise) and fixes the column order of label matrices.
struct Dataset {
  Eigen::MatrixXd features;             // n x d
  std::vector<std::string> labels;      // size n
  std::vector<std::string> class_list;  // c distinct tokens, sorted
  std::string name;

  int n() const { return static_cast<int>(features.rows()); }
  int d() const { return static_cast<int>(features.cols()); }
  int c() const { return static_cast<int>(class_list.size()); }
};

// m x c matrix with entries in {-1, +1}, exactly one +1 per row.
using LabelMatrix = Eigen::MatrixXd;

struct SplitSpec {
  double pool_fraction = 0.6;
  std::uint64_t seed = 0;
  int init_per_class = 0;
};

struct Split {
  std::vector<int> pool;             // dataset rows, |pool| = floor(fraction*n)
  std::vector<int> test;             // complement of pool
  std::vector<int> initial_labeled;  // subset of pool, init_per_class per class
};

// Comma-separated rows: d feature fields then one label field. A header row
// is skipped when any of its feature fields is non-numeric.
Dataset load_csv(const std::string& path);

// Rows of the form `label idx:val ...` with 1-based strictly increasing
// indices, densified to n x max_index.
Dataset load_sparse(const std::string& path);

LabelMatrix encode_labels(const std::vector<std::string>& labels,
                          const std::vector<std::string>& class_list);

// Same encoding from class positions already resolved against class_list.
LabelMatrix label_matrix_from_positions(const std::vector<int>& positions,
                                        int c);

// Position of every row's label in class_list.
std::vector<int> class_positions(const Dataset& ds);

// Seeded uniform pool/test partition. The initial labeled set draws
// init_per_class pool members from each class; if some class has too few pool
// members the split is retried with the next derived seed, up to 100 retries.
Split split(const Dataset& ds, const SplitSpec& spec);

// In-place min-max rescale of every feature column to [0, 1]; constant
// columns map to 0.
void rescale_unit(Eigen::MatrixXd& features);

}  // namespace alh
