#pragma once

#include <Eigen/Dense>
#include <vector>

#include "alh/kernel.hpp"
#include "alh/state.hpp"

namespace alh {

struct QpProblem {
  Eigen::MatrixXd Q;  // symmetric PSD, u x u
  Eigen::VectorXd q;  // length u
};

// Point on the probability simplex: entries in [0, 1], summing to 1.
struct Alpha {
  Eigen::VectorXd values;
};

struct SimplexQpResult {
  Alpha alpha;
  bool converged = false;
  int iterations = 0;
  double kkt_residual = 0.0;
};

// Squared kernel mean discrepancy between two disjoint index sets of the
// cached pool:
//   (1/|S1|^2) sum K + (1/|S2|^2) sum K - (2/(|S1||S2|)) sum K.
double mmd_direct(const std::vector<int>& s1, const std::vector<int>& s2,
                  const GramCache& gram);

// Quadratic program whose one-hot restriction is an increasing affine
// function of mmd_direct(labeled + candidate, unlabeled \ candidate):
//   Q = K_UU,
//   q = ((u-1)/(l+u)) 1' K_LU - ((l+1)/(l+u)) 1' K_UU.
QpProblem build_mmd_qp(const ActiveState& state, const GramCache& gram);

// Projected gradient with backtracking over the probability simplex.
// Terminates when the unit-step fixed-point residual ||a - P(a - grad)||
// drops below tol; hitting max_iter returns the best iterate unconverged.
SimplexQpResult solve_simplex_qp(const QpProblem& p, double tol = 1e-8,
                                 int max_iter = 5000);

// Index of the largest entry; ties go to the smallest index.
int round_alpha(const Alpha& alpha);

// Exact Euclidean projection onto the simplex (sort-based).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

}  // namespace alh
