#pragma once

#include <vector>

namespace alh {

// Partition of one run's pool into labeled and unlabeled points. Entries are
// pool positions (0..p-1). revealed[i] is the class position of labeled[i];
// labels of unlabeled points are never stored here, so selection code cannot
// read a label before its index is queried.
struct ActiveState {
  std::vector<int> labeled;
  std::vector<int> unlabeled;
  std::vector<int> revealed;

  int l() const { return static_cast<int>(labeled.size()); }
  int u() const { return static_cast<int>(unlabeled.size()); }
};

}  // namespace alh
