#pragma once

#include <Eigen/Dense>

#include "alh/dataset.hpp"
#include "alh/informative.hpp"
#include "alh/kernel.hpp"
#include "alh/representative.hpp"
#include "alh/state.hpp"

namespace alh {

// Iterates of the ADMM split on the candidate constraint a = theta' k_s.
struct AdmmState {
  Eigen::MatrixXd theta;  // l x c
  Eigen::VectorXd a;      // c, auxiliary variable
  Eigen::VectorXd xi;     // c, dual variable
  double rho = 1.0;
  int iteration = 0;
};

struct AdmmResult {
  ModelCoefficients theta;
  bool converged = false;
  int iterations = 0;
};

struct SelectionResult {
  int pool_relative_index = -1;  // position in state.unlabeled
  Alpha alpha;
  ModelCoefficients theta;
  int alternations = 0;
  bool converged = false;
};

// Elementwise sign(v) * max(|v| - omega, 0).
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double omega);

// Theta subproblem at one candidate, solved by ADMM with per-class updates:
//   B theta_k = b_k,  B = K_LL^2 + (rho/2) k_s k_s' + lambda K_LL,
//                     b_k = K_LL Y_k + (1/2) xi_k k_s + (rho/2) a_k k_s
//   a_k  = soft_threshold((rho k_s'theta_k - xi_k)/(rho+2), 2/(rho+2))
//   xi_k += rho (a_k - k_s'theta_k)
// Stops when primal ||a - theta'k_s|| and dual rho ||a - a_prev|| fall below
// tol. theta_init warm-starts theta (zero when null); a starts at theta'k_s
// and xi at zero.
AdmmResult admm_solve_theta(const ActiveState& state, int candidate,
                            const LabelMatrix& Y_L, const GramCache& gram,
                            const HyperParams& hp, double tol = 1e-6,
                            int max_iter = 200,
                            const Eigen::MatrixXd* theta_init = nullptr);

// Objective the ADMM minimizes, with the constraint substituted in:
// ||Y - K_LL theta||_F^2 + ||theta'k_s||^2 + 2||theta'k_s||_1
//   + lambda * trace(theta' K_LL theta).
double candidate_objective(const Eigen::MatrixXd& theta,
                           const Eigen::MatrixXd& K_LL,
                           const LabelMatrix& Y_L,
                           const Eigen::VectorXd& k_s, double lambda);

// Alpha subproblem at fixed theta: Q = beta K_UU, q = beta q_mmd + K3,
// where K3_i is the informative penalty of candidate i.
SimplexQpResult solve_alpha(const ActiveState& state,
                            const Eigen::MatrixXd& theta,
                            const GramCache& gram, const HyperParams& hp);

// Alternates the alpha and theta subproblems from the labeled-only fit until
// the chosen candidate repeats or loop_cap alternations pass. Each alpha step
// picks the candidate whose one-hot indicator minimizes the current subproblem
// (the binary program the simplex relaxation approximates). Falls back to
// cold_start_select when no labels exist.
SelectionResult select_query_iral(const ActiveState& state,
                                  const LabelMatrix& Y_L,
                                  const GramCache& gram, const HyperParams& hp,
                                  int loop_cap = 10);

// Representative-only selection for the empty labeled set: the candidate whose
// one-hot indicator minimizes the discrepancy QP.
SelectionResult cold_start_select(const ActiveState& state,
                                  const GramCache& gram,
                                  const HyperParams& hp);

}  // namespace alh
