#include "alh/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace alh {

double rbf(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double gamma) {
  if (x.size() != y.size())
    throw std::invalid_argument("rbf: dimension mismatch");
  if (gamma <= 0.0) throw std::invalid_argument("rbf: gamma must be > 0");
  return std::exp(-gamma * (x - y).squaredNorm());
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     double gamma) {
  if (A.cols() != B.cols())
    throw std::invalid_argument("gram: dimension mismatch");
  if (gamma <= 0.0) throw std::invalid_argument("gram: gamma must be > 0");
  Eigen::MatrixXd K(A.rows(), B.rows());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < B.rows(); ++j)
      K(i, j) = std::exp(-gamma * (A.row(i) - B.row(j)).squaredNorm());
  return K;
}

Eigen::MatrixXd class_scores(const Eigen::MatrixXd& theta,
                             const Eigen::MatrixXd& K_Lx) {
  if (theta.rows() != K_Lx.rows())
    throw std::invalid_argument("class_scores: shape mismatch");
  return theta.transpose() * K_Lx;
}

GramCache::GramCache(const Eigen::MatrixXd& pool_features, double gamma)
    : K_(gram(pool_features, pool_features, gamma)) {}

Eigen::MatrixXd GramCache::block(const std::vector<int>& rows,
                                 const std::vector<int>& cols) const {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<int>(i), static_cast<int>(j)) = K_(rows[i], cols[j]);
  return out;
}

Eigen::VectorXd GramCache::column(const std::vector<int>& rows,
                                  int col) const {
  Eigen::VectorXd out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out(static_cast<int>(i)) = K_(rows[i], col);
  return out;
}

}  // namespace alh
