#include "alh/iral.hpp"

#include <cmath>
#include <stdexcept>

#include "alh/learner.hpp"

namespace alh {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double omega) {
  if (omega < 0.0) throw std::invalid_argument("soft_threshold: omega must be >= 0");
  Eigen::VectorXd out(v.size());
  for (int i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i)) - omega;
    out(i) = mag > 0.0 ? (v(i) > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

AdmmResult admm_solve_theta(const ActiveState& state, int candidate,
                            const LabelMatrix& Y_L, const GramCache& gram,
                            const HyperParams& hp, double tol, int max_iter,
                            const Eigen::MatrixXd* theta_init) {
  const int l = state.l();
  if (l < 1) throw std::invalid_argument("admm_solve_theta: no labeled points");
  if (candidate < 0 || candidate >= state.u())
    throw std::invalid_argument("admm_solve_theta: candidate out of range");
  if (Y_L.rows() != l)
    throw std::invalid_argument("admm_solve_theta: label matrix shape mismatch");
  const int c = static_cast<int>(Y_L.cols());
  const double rho = hp.rho;
  if (rho <= 0.0) throw std::invalid_argument("admm_solve_theta: rho must be > 0");

  const Eigen::MatrixXd K_LL = gram.block(state.labeled, state.labeled);
  const Eigen::VectorXd k_s = gram.column(state.labeled, state.unlabeled[candidate]);
  const Eigen::MatrixXd KY = K_LL * Y_L;

  auto factor = [&](double jitter) {
    Eigen::MatrixXd K = K_LL;
    if (jitter > 0.0) K.diagonal().array() += jitter;
    Eigen::MatrixXd B =
        K * K + 0.5 * rho * (k_s * k_s.transpose()) + hp.lambda * K;
    return Eigen::LDLT<Eigen::MatrixXd>(B);
  };
  Eigen::LDLT<Eigen::MatrixXd> solver = factor(0.0);
  if (solver.info() != Eigen::Success || !solver.solve(KY).allFinite()) {
    solver = factor(1e-10);
    if (solver.info() != Eigen::Success || !solver.solve(KY).allFinite())
      throw std::runtime_error("admm_solve_theta: candidate system not solvable");
  }

  Eigen::MatrixXd theta;
  if (theta_init != nullptr) {
    if (theta_init->rows() != l || theta_init->cols() != c)
      throw std::invalid_argument("admm_solve_theta: theta_init shape mismatch");
    theta = *theta_init;
  } else {
    theta = Eigen::MatrixXd::Zero(l, c);
  }
  Eigen::VectorXd a = theta.transpose() * k_s;
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(c);
  const double omega = 2.0 / (rho + 2.0);

  AdmmResult result;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::MatrixXd rhs =
        KY + k_s * (0.5 * xi + 0.5 * rho * a).transpose();
    theta = solver.solve(rhs);
    const Eigen::VectorXd t = theta.transpose() * k_s;
    const Eigen::VectorXd a_new =
        soft_threshold((rho * t - xi) / (rho + 2.0), omega);
    const double primal = (a_new - t).norm();
    const double dual = rho * (a_new - a).norm();
    xi += rho * (a_new - t);
    a = a_new;
    result.iterations = it;
    if (primal < tol && dual < tol) {
      result.converged = true;
      break;
    }
  }
  if (!theta.allFinite())
    throw std::runtime_error("admm_solve_theta: iterates diverged");
  result.theta.theta = std::move(theta);
  return result;
}

double candidate_objective(const Eigen::MatrixXd& theta,
                           const Eigen::MatrixXd& K_LL, const LabelMatrix& Y_L,
                           const Eigen::VectorXd& k_s, double lambda) {
  if (theta.rows() != K_LL.rows() || Y_L.rows() != K_LL.rows() ||
      Y_L.cols() != theta.cols() || k_s.size() != theta.rows())
    throw std::invalid_argument("candidate_objective: shape mismatch");
  const Eigen::VectorXd f = theta.transpose() * k_s;
  return (Y_L - K_LL * theta).squaredNorm() + f.squaredNorm() +
         2.0 * f.lpNorm<1>() + lambda * (theta.transpose() * K_LL * theta).trace();
}

static QpProblem build_alpha_qp(const ActiveState& state,
                                const Eigen::MatrixXd& theta,
                                const GramCache& gram, const HyperParams& hp) {
  const QpProblem mmd = build_mmd_qp(state, gram);
  const int u = state.u();
  Eigen::VectorXd k3(u);
  for (int i = 0; i < u; ++i)
    k3(i) = informative_penalty(
        theta, gram.column(state.labeled, state.unlabeled[i]));
  QpProblem qp;
  qp.Q = hp.beta * mmd.Q;
  qp.q = hp.beta * mmd.q + k3;
  return qp;
}

// Exact minimizer of the binary problem the simplex relaxation approximates:
// over one-hot indicators the objective reduces to Q(i,i)/2 + q(i).
static int best_one_hot(const QpProblem& qp) {
  int best = 0;
  for (int i = 1; i < qp.q.size(); ++i)
    if (0.5 * qp.Q(i, i) + qp.q(i) < 0.5 * qp.Q(best, best) + qp.q(best))
      best = i;
  return best;
}

SimplexQpResult solve_alpha(const ActiveState& state,
                            const Eigen::MatrixXd& theta,
                            const GramCache& gram, const HyperParams& hp) {
  if (theta.rows() != state.l())
    throw std::invalid_argument("solve_alpha: theta row count != labeled count");
  return solve_simplex_qp(build_alpha_qp(state, theta, gram, hp));
}

SelectionResult select_query_iral(const ActiveState& state,
                                  const LabelMatrix& Y_L,
                                  const GramCache& gram, const HyperParams& hp,
                                  int loop_cap) {
  if (state.u() == 0)
    throw std::invalid_argument("select_query_iral: empty unlabeled pool");
  if (state.l() == 0) return cold_start_select(state, gram, hp);
  if (loop_cap < 1)
    throw std::invalid_argument("select_query_iral: loop_cap must be >= 1");

  const Eigen::MatrixXd K_LL = gram.block(state.labeled, state.labeled);
  const Eigen::MatrixXd theta0 = fit(K_LL, Y_L, hp.lambda).theta;

  SelectionResult result;
  if (state.u() == 1) {
    result.pool_relative_index = 0;
    result.alpha.values = Eigen::VectorXd::Ones(1);
    result.theta.theta = theta0;
    result.converged = true;
    return result;
  }

  Eigen::MatrixXd theta = theta0;
  SimplexQpResult qp;
  int prev = -1;
  for (int it = 0; it < loop_cap; ++it) {
    const QpProblem sub = build_alpha_qp(state, theta, gram, hp);
    qp = solve_simplex_qp(sub);
    const int s = best_one_hot(sub);
    if (s == prev) {
      result.converged = true;
      break;
    }
    theta = admm_solve_theta(state, s, Y_L, gram, hp, 1e-6, 200, &theta0)
                .theta.theta;
    prev = s;
    ++result.alternations;
  }
  result.pool_relative_index = prev;
  result.alpha = qp.alpha;
  result.theta.theta = std::move(theta);
  return result;
}

SelectionResult cold_start_select(const ActiveState& state,
                                  const GramCache& gram,
                                  const HyperParams& /*hp*/) {
  if (state.l() != 0)
    throw std::invalid_argument("cold_start_select: labeled set must be empty");
  if (state.u() == 0)
    throw std::invalid_argument("cold_start_select: empty unlabeled pool");

  SelectionResult result;
  result.theta.theta.resize(0, 0);
  if (state.u() == 1) {
    result.pool_relative_index = 0;
    result.alpha.values = Eigen::VectorXd::Ones(1);
    result.converged = true;
    return result;
  }
  const QpProblem problem = build_mmd_qp(state, gram);
  const SimplexQpResult qp = solve_simplex_qp(problem);
  result.pool_relative_index = best_one_hot(problem);
  result.alpha = qp.alpha;
  result.converged = qp.converged;
  return result;
}

}  // namespace alh
