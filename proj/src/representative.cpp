#include "alh/representative.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace alh {

double mmd_direct(const std::vector<int>& s1, const std::vector<int>& s2,
                  const GramCache& gram) {
  if (s1.empty() || s2.empty())
    throw std::invalid_argument("mmd_direct: empty set");
  const double n1 = static_cast<double>(s1.size());
  const double n2 = static_cast<double>(s2.size());
  double sum11 = 0.0, sum22 = 0.0, sum12 = 0.0;
  for (int i : s1)
    for (int j : s1) sum11 += gram.at(i, j);
  for (int i : s2)
    for (int j : s2) sum22 += gram.at(i, j);
  for (int i : s1)
    for (int j : s2) sum12 += gram.at(i, j);
  return sum11 / (n1 * n1) + sum22 / (n2 * n2) - 2.0 * sum12 / (n1 * n2);
}

QpProblem build_mmd_qp(const ActiveState& state, const GramCache& gram) {
  const int u = state.u();
  const int l = state.l();
  if (u < 2)
    throw std::invalid_argument(
        "build_mmd_qp: need at least two unlabeled candidates");

  QpProblem p;
  p.Q = gram.block(state.unlabeled, state.unlabeled);
  Eigen::VectorXd colsum_uu = p.Q.colwise().sum();
  Eigen::VectorXd rowsum_lu = Eigen::VectorXd::Zero(u);
  if (l > 0)
    rowsum_lu = gram.block(state.labeled, state.unlabeled).colwise().sum();

  const double lu = static_cast<double>(l + u);
  p.q = (static_cast<double>(u - 1) / lu) * rowsum_lu -
        (static_cast<double>(l + 1) / lu) * colsum_uu;
  return p;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, tau = 0.0;
  int support = 0;
  for (int j = 0; j < n; ++j) {
    css += u[j];
    const double t = (css - 1.0) / (j + 1);
    if (u[j] - t > 0.0) {
      tau = t;
      support = j + 1;
    }
  }
  (void)support;
  return (v.array() - tau).max(0.0);
}

SimplexQpResult solve_simplex_qp(const QpProblem& p, double tol,
                                 int max_iter) {
  const int u = static_cast<int>(p.q.size());
  if (p.Q.rows() != u || p.Q.cols() != u)
    throw std::invalid_argument("solve_simplex_qp: shape mismatch");
  if ((p.Q - p.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("solve_simplex_qp: Q is not symmetric");

  SimplexQpResult res;
  if (u == 1) {
    res.alpha.values = Eigen::VectorXd::Ones(1);
    res.converged = true;
    return res;
  }

  const auto value = [&](const Eigen::VectorXd& a) {
    return 0.5 * a.dot(p.Q * a) + p.q.dot(a);
  };

  Eigen::VectorXd alpha = Eigen::VectorXd::Constant(u, 1.0 / u);
  double f = value(alpha);
  double step = 1.0;
  int iter = 0;
  double kkt = 0.0;

  for (iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd g = p.Q * alpha + p.q;
    kkt = (alpha - project_simplex(alpha - g)).norm();
    if (kkt <= tol) {
      res.converged = true;
      break;
    }
    // backtracking on the proximal sufficient-decrease condition
    Eigen::VectorXd cand;
    double fc = 0.0;
    for (;;) {
      cand = project_simplex(alpha - step * g);
      const Eigen::VectorXd diff = cand - alpha;
      fc = value(cand);
      if (fc <= f + g.dot(diff) + diff.squaredNorm() / (2.0 * step) + 1e-18)
        break;
      step *= 0.5;
      if (step < 1e-18) break;  // stalled at numerical resolution
    }
    alpha = cand;
    f = fc;
    step = std::min(step * 2.0, 1e12);
  }

  alpha = alpha.cwiseMax(0.0).cwiseMin(1.0);
  res.alpha.values = alpha;
  res.iterations = iter;
  res.kkt_residual = kkt;
  return res;
}

int round_alpha(const Alpha& alpha) {
  int best = 0;
  for (int i = 1; i < alpha.values.size(); ++i)
    if (alpha.values(i) > alpha.values(best)) best = i;
  return best;
}

}  // namespace alh
