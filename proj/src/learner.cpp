#include "alh/learner.hpp"

#include <stdexcept>

#include "alh/kernel.hpp"

namespace alh {

FittedModel fit(const Eigen::MatrixXd& K_LL, const LabelMatrix& Y_L,
                double lambda, std::vector<int> labeled_indices) {
  const int l = static_cast<int>(K_LL.rows());
  if (l < 1) throw std::invalid_argument("fit: need at least one labeled point");
  if (K_LL.cols() != l || Y_L.rows() != l)
    throw std::invalid_argument("fit: shape mismatch");
  if (lambda <= 0.0) throw std::invalid_argument("fit: lambda must be > 0");

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(l, l);
  Eigen::LLT<Eigen::MatrixXd> llt(K_LL + lambda * I);
  Eigen::MatrixXd theta;
  if (llt.info() == Eigen::Success) theta = llt.solve(Y_L);
  if (llt.info() != Eigen::Success || !theta.allFinite()) {
    Eigen::LLT<Eigen::MatrixXd> retry(K_LL + (lambda + 1e-10) * I);
    if (retry.info() != Eigen::Success)
      throw std::runtime_error("fit: kernel system not solvable");
    theta = retry.solve(Y_L);
    if (!theta.allFinite())
      throw std::runtime_error("fit: kernel system not solvable");
  }

  FittedModel model;
  model.theta = std::move(theta);
  model.labeled_indices = std::move(labeled_indices);
  model.lambda = lambda;
  return model;
}

std::vector<int> predict(const FittedModel& model,
                         const Eigen::MatrixXd& K_Lx) {
  const Eigen::MatrixXd scores = class_scores(model.theta, K_Lx);  // c x m
  std::vector<int> out(scores.cols());
  for (int j = 0; j < scores.cols(); ++j) {
    int best = 0;
    for (int k = 1; k < scores.rows(); ++k)
      if (scores(k, j) > scores(best, j)) best = k;
    out[j] = best;
  }
  return out;
}

double accuracy(const std::vector<int>& predicted,
                const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw std::invalid_argument("accuracy: length mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace alh
