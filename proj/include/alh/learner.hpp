#pragma once

#include <Eigen/Dense>
#include <vector>

#include "alh/dataset.hpp"

namespace alh {

// One-vs-rest kernel regularized least squares, used to evaluate strategies.
struct FittedModel {
  Eigen::MatrixXd theta;  // l x c
  std::vector<int> labeled_indices;
  double lambda = 0.1;
};

// Solves (K_LL + lambda I) theta = Y with one factorization shared across
// the c columns; retries once with 1e-10 diagonal jitter.
FittedModel fit(const Eigen::MatrixXd& K_LL, const LabelMatrix& Y_L,
                double lambda, std::vector<int> labeled_indices = {});

// Argmax class position per column of K_Lx; ties go to the smallest class.
std::vector<int> predict(const FittedModel& model,
                         const Eigen::MatrixXd& K_Lx);

double accuracy(const std::vector<int>& predicted,
                const std::vector<int>& truth);

}  // namespace alh
