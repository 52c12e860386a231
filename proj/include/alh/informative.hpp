#pragma once

#include <Eigen/Dense>

#include "alh/kernel.hpp"
#include "alh/representative.hpp"
#include "alh/state.hpp"

namespace alh {

// Kernel-expansion coefficients of the multi-class model, one column per
// class, one row per labeled point.
struct ModelCoefficients {
  Eigen::MatrixXd theta;  // l x c
};

struct HyperParams {
  double lambda = 0.1;  // regularization weight
  double beta = 100.0;  // informative/representative trade-off
  double rho = 1.0;     // ADMM penalty
};

// Adversarial +-1 label vector -sign(f_k), with sign(0) := +1 so a zero
// score maps to -1. Maximizes sum_k (y_k - f_k)^2 over all +-1 vectors.
Eigen::VectorXd worst_case_pseudo_label(const Eigen::VectorXd& scores);

// ||f||_2^2 + 2 ||f||_1 with f = theta' k_s; the per-candidate term left
// after the worst-case pseudo-label collapses the candidate loss.
double informative_penalty(const Eigen::MatrixXd& theta,
                           const Eigen::VectorXd& k_s);

// Full selection objective: labeled squared loss + alpha-weighted candidate
// penalties + lambda * trace(theta' K_LL theta) + beta * representative QP
// value. Labels come from state.revealed.
double combined_objective(const Eigen::MatrixXd& theta, const Alpha& alpha,
                          const ActiveState& state, const GramCache& gram,
                          const HyperParams& hp);

}  // namespace alh
