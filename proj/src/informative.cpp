#include "alh/informative.hpp"

#include <stdexcept>

#include "alh/dataset.hpp"

namespace alh {

Eigen::VectorXd worst_case_pseudo_label(const Eigen::VectorXd& scores) {
  if (!scores.allFinite())
    throw std::invalid_argument("worst_case_pseudo_label: non-finite scores");
  Eigen::VectorXd y(scores.size());
  for (int k = 0; k < scores.size(); ++k)
    y(k) = scores(k) >= 0.0 ? -1.0 : 1.0;  // sign(0) := +1, so label -1
  return y;
}

double informative_penalty(const Eigen::MatrixXd& theta,
                           const Eigen::VectorXd& k_s) {
  if (theta.rows() != k_s.size())
    throw std::invalid_argument("informative_penalty: shape mismatch");
  const Eigen::VectorXd f = theta.transpose() * k_s;
  return f.squaredNorm() + 2.0 * f.lpNorm<1>();
}

double combined_objective(const Eigen::MatrixXd& theta, const Alpha& alpha,
                          const ActiveState& state, const GramCache& gram,
                          const HyperParams& hp) {
  const int l = state.l();
  const int u = state.u();
  const int c = static_cast<int>(theta.cols());
  if (theta.rows() != l)
    throw std::invalid_argument("combined_objective: theta rows != l");
  if (alpha.values.size() != u)
    throw std::invalid_argument("combined_objective: alpha length != u");

  const LabelMatrix Y = label_matrix_from_positions(state.revealed, c);
  const Eigen::MatrixXd K_LL = gram.block(state.labeled, state.labeled);

  const double labeled_loss = (Y - K_LL * theta).squaredNorm();

  double weighted_penalty = 0.0;
  for (int i = 0; i < u; ++i) {
    const Eigen::VectorXd k_i = gram.column(state.labeled, state.unlabeled[i]);
    weighted_penalty += alpha.values(i) * informative_penalty(theta, k_i);
  }

  const double reg = hp.lambda * (theta.transpose() * K_LL * theta).trace();

  const QpProblem qp = build_mmd_qp(state, gram);
  const double representative =
      0.5 * alpha.values.dot(qp.Q * alpha.values) + qp.q.dot(alpha.values);

  return labeled_loss + weighted_penalty + reg + hp.beta * representative;
}

}  // namespace alh
