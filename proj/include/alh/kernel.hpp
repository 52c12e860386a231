#pragma once

#include <Eigen/Dense>
#include <vector>

namespace alh {

struct KernelParams {
  double gamma = 1.0;  // > 0
};

// exp(-gamma * ||x - y||^2), in (0, 1].
double rbf(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double gamma);

// Pairwise kernel matrix between the rows of A and B.
Eigen::MatrixXd gram(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     double gamma);

// Per-class scores f_k(x_j) = theta_k . K_Lx[:, j], returned as c x m.
Eigen::MatrixXd class_scores(const Eigen::MatrixXd& theta,
                             const Eigen::MatrixXd& K_Lx);

// Kernel matrix over all pool points, computed once per run. Labeled and
// unlabeled blocks are materialised on demand from the current partition;
// the cache itself never changes while queries move indices around.
class GramCache {
 public:
  GramCache(const Eigen::MatrixXd& pool_features, double gamma);

  int size() const { return static_cast<int>(K_.rows()); }
  double at(int i, int j) const { return K_(i, j); }
  const Eigen::MatrixXd& full() const { return K_; }

  Eigen::MatrixXd block(const std::vector<int>& rows,
                        const std::vector<int>& cols) const;
  Eigen::VectorXd column(const std::vector<int>& rows, int col) const;

 private:
  Eigen::MatrixXd K_;
};

}  // namespace alh
