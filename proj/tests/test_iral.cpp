#include <cmath>
#include <limits>
#include <vector>

#include "alh/iral.hpp"
#include "alh/learner.hpp"
#include "alh/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

namespace {

alh::LabelMatrix labels_for(const alh::ActiveState& state, int c) {
  return alh::label_matrix_from_positions(state.revealed, c);
}

// Global minimum of the single-candidate objective, summed over classes via
// the closed-form branch oracle.
double oracle_candidate_min(const oracle::TestPool& pool, int candidate,
                            double gamma, double lambda) {
  const alh::ActiveState& st = pool.state;
  const int l = st.l();
  Eigen::MatrixXd K(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      K(i, j) = oracle::rbf_rows(pool.X, st.labeled[i], st.labeled[j], gamma);
  Eigen::VectorXd k(l);
  for (int i = 0; i < l; ++i)
    k(i) = oracle::rbf_rows(pool.X, st.labeled[i], st.unlabeled[candidate], gamma);
  const alh::LabelMatrix Y = labels_for(st, pool.c);
  double total = 0.0;
  for (int cls = 0; cls < pool.c; ++cls)
    total += oracle::candidate_class_min(K, Y.col(cls), k, lambda);
  return total;
}

// Brute-force selection reference: for every candidate, re-solve theta by the
// splitting solver at tight tolerance and evaluate the full objective at the
// matching one-hot alpha; return (argmin, per-candidate values).
std::pair<int, std::vector<double>> enumerate_selection(
    const oracle::TestPool& pool, const alh::GramCache& cache,
    const alh::HyperParams& hp) {
  const int u = pool.state.u();
  const alh::LabelMatrix Y = labels_for(pool.state, pool.c);
  std::vector<double> vals(u);
  int best = 0;
  for (int s = 0; s < u; ++s) {
    const alh::AdmmResult r = alh::admm_solve_theta(pool.state, s, Y, cache,
                                                    hp, 1e-9, 2000);
    alh::Alpha onehot;
    onehot.values = Eigen::VectorXd::Zero(u);
    onehot.values(s) = 1.0;
    vals[s] = alh::combined_objective(r.theta.theta, onehot, pool.state, cache, hp);
    if (vals[s] < vals[best]) best = s;
  }
  return {best, vals};
}

}  // namespace

TEST_SUITE("iral") {

TEST_CASE("soft threshold closed forms") {
  Eigen::VectorXd v(1);
  v << 0.0;
  CHECK(alh::soft_threshold(v, 1.0)(0) == 0.0);
  v << 3.0;
  CHECK(alh::soft_threshold(v, 1.0)(0) == 2.0);
  v << -3.0;
  CHECK(alh::soft_threshold(v, 1.0)(0) == -2.0);

  alh::Rng rng(51);
  Eigen::VectorXd w(5);
  for (int i = 0; i < 5; ++i) w(i) = 0.8 * (2.0 * rng.uniform01() - 1.0);
  CHECK(alh::soft_threshold(w, 0.9).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(alh::soft_threshold(w, -0.1));
}

TEST_CASE("a-update is the exact scalar proximal minimizer") {
  alh::Rng rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const double t = 4.0 * rng.normal();
    const double xi = 2.0 * rng.normal();
    const double rho = 0.2 + 3.0 * rng.uniform01();
    Eigen::VectorXd v(1);
    v << (rho * t - xi) / (rho + 2.0);
    const double a = alh::soft_threshold(v, 2.0 / (rho + 2.0))(0);

    auto fn = [&](double z) {
      return z * z + 2.0 * std::abs(z) + xi * (z - t) +
             0.5 * rho * (z - t) * (z - t);
    };
    const double span = std::abs(v(0)) + 1.0;
    const double grid = oracle::convex_argmin(fn, -span, span, 1e-6);
    CHECK(std::abs(a - grid) <= 1.000001e-6);
  }
}

TEST_CASE("a far-away candidate reduces to the plain kernel fit") {
  // labeled points near the origin; candidate 6 units away so every kernel
  // value to it is below 4e-16
  Eigen::MatrixXd x(4, 2);
  x << 0.0, 0.1,
       0.2, -0.1,
       -0.1, 0.0,
       6.0, 6.0;
  const alh::GramCache cache(x, 1.0);
  alh::ActiveState state;
  state.labeled = {0, 1, 2};
  state.revealed = {0, 1, 0};
  state.unlabeled = {3};
  const alh::LabelMatrix Y = labels_for(state, 2);

  alh::HyperParams hp;
  const alh::AdmmResult r =
      alh::admm_solve_theta(state, 0, Y, cache, hp, 1e-10, 2000);
  CHECK(r.converged);

  const Eigen::MatrixXd K = cache.block(state.labeled, state.labeled);
  const Eigen::MatrixXd plain =
      (K * K + hp.lambda * K).fullPivLu().solve(K * Y);
  CHECK((r.theta.theta - plain).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("tiny instance reaches the closed-form objective") {
  alh::Rng rng(53);
  oracle::TestPool pool = oracle::make_pool(rng, 1, 2, 2, 2);
  const double gamma = 0.8;
  const alh::GramCache cache(pool.X, gamma);
  const alh::LabelMatrix Y = labels_for(pool.state, 2);
  alh::HyperParams hp;

  const alh::AdmmResult r =
      alh::admm_solve_theta(pool.state, 0, Y, cache, hp, 1e-10, 2000);
  const Eigen::VectorXd k_s = cache.column(pool.state.labeled, pool.state.unlabeled[0]);
  const double got = alh::candidate_objective(
      r.theta.theta, cache.block(pool.state.labeled, pool.state.labeled), Y,
      k_s, hp.lambda);
  const double want = oracle_candidate_min(pool, 0, gamma, hp.lambda);
  CHECK(got == doctest::Approx(want).epsilon(1e-4));
}

TEST_CASE("default initialization is all-zero and runs are bitwise equal") {
  alh::Rng rng(54);
  oracle::TestPool pool = oracle::make_pool(rng, 5, 3, 2, 2);
  const alh::GramCache cache(pool.X, 0.5);
  const alh::LabelMatrix Y = labels_for(pool.state, 2);
  alh::HyperParams hp;

  const alh::AdmmResult a = alh::admm_solve_theta(pool.state, 1, Y, cache, hp);
  const alh::AdmmResult b = alh::admm_solve_theta(pool.state, 1, Y, cache, hp);
  CHECK(a.iterations == b.iterations);
  CHECK(a.theta.theta == b.theta.theta);

  // one iteration from zero theta matches the hand-rolled first update
  const alh::AdmmResult one =
      alh::admm_solve_theta(pool.state, 1, Y, cache, hp, 1e-6, 1);
  const Eigen::MatrixXd K = cache.block(pool.state.labeled, pool.state.labeled);
  const Eigen::VectorXd k_s = cache.column(pool.state.labeled, pool.state.unlabeled[1]);
  const Eigen::MatrixXd B =
      K * K + 0.5 * hp.rho * k_s * k_s.transpose() + hp.lambda * K;
  const Eigen::MatrixXd first = B.ldlt().solve(K * Y);  // a = 0, xi = 0
  CHECK((one.theta.theta - first).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("objective stays finite and the solution is a local minimum") {
  alh::Rng rng(55);
  oracle::TestPool pool = oracle::make_pool(rng, 6, 4, 3, 2);
  const alh::GramCache cache(pool.X, 0.5);
  const alh::LabelMatrix Y = labels_for(pool.state, 3);
  alh::HyperParams hp;
  const Eigen::MatrixXd K = cache.block(pool.state.labeled, pool.state.labeled);
  const Eigen::VectorXd k_s = cache.column(pool.state.labeled, pool.state.unlabeled[2]);

  auto objective = [&](const Eigen::MatrixXd& th) {
    return alh::candidate_objective(th, K, Y, k_s, hp.lambda);
  };

  // truncated solves expose the iterate trajectory
  double first = 0.0, last = 0.0;
  for (int cap = 1; cap <= 30; ++cap) {
    const alh::AdmmResult r =
        alh::admm_solve_theta(pool.state, 2, Y, cache, hp, 0.0, cap);
    const double v = objective(r.theta.theta);
    CHECK(std::isfinite(v));
    if (cap == 1) first = v;
    last = v;
  }
  CHECK(last <= first + 1e-9);

  const alh::AdmmResult r =
      alh::admm_solve_theta(pool.state, 2, Y, cache, hp, 1e-10, 5000);
  REQUIRE(r.converged);
  const double at_solution = objective(r.theta.theta);
  for (int probe = 0; probe < 100; ++probe) {
    Eigen::MatrixXd dir(K.rows(), 3);
    for (int i = 0; i < dir.rows(); ++i)
      for (int j = 0; j < 3; ++j) dir(i, j) = rng.normal();
    dir /= dir.norm();
    CHECK(objective(r.theta.theta + 1e-4 * dir) >= at_solution - 1e-8);
  }
}

TEST_CASE("alpha step with zero theta is the pure representative solve") {
  alh::Rng rng(56);
  oracle::TestPool pool = oracle::make_pool(rng, 3, 6, 2, 2);
  const alh::GramCache cache(pool.X, 0.5);
  alh::HyperParams hp;

  const alh::SimplexQpResult with_zero = alh::solve_alpha(
      pool.state, Eigen::MatrixXd::Zero(3, 2), cache, hp);
  const alh::QpProblem rep = alh::build_mmd_qp(pool.state, cache);
  alh::QpProblem scaled;
  scaled.Q = hp.beta * rep.Q;
  scaled.q = hp.beta * rep.q;
  const alh::SimplexQpResult pure = alh::solve_simplex_qp(scaled);
  CHECK((with_zero.alpha.values - pure.alpha.values).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("huge beta recovers the representative argmin") {
  alh::Rng rng(57);
  oracle::TestPool pool = oracle::make_pool(rng, 4, 8, 2, 2);
  const alh::GramCache cache(pool.X, 0.5);
  const alh::LabelMatrix Y = labels_for(pool.state, 2);
  const Eigen::MatrixXd theta =
      alh::fit(cache.block(pool.state.labeled, pool.state.labeled), Y, 0.1)
          .theta;

  alh::HyperParams hp;
  hp.beta = 1e9;
  const alh::SimplexQpResult big = alh::solve_alpha(pool.state, theta, cache, hp);
  const alh::SimplexQpResult rep =
      alh::solve_simplex_qp(alh::build_mmd_qp(pool.state, cache));
  CHECK(alh::round_alpha(big.alpha) == alh::round_alpha(rep.alpha));
}

TEST_CASE("relaxed alpha never loses to the best vertex") {
  alh::Rng rng(58);
  for (int trial = 0; trial < 6; ++trial) {
    const int u = 3 + static_cast<int>(rng.below(10));
    oracle::TestPool pool = oracle::make_pool(rng, 4, u, 2, 2);
    const alh::GramCache cache(pool.X, 0.5);
    const alh::LabelMatrix Y = labels_for(pool.state, 2);
    const Eigen::MatrixXd theta =
        alh::fit(cache.block(pool.state.labeled, pool.state.labeled), Y, 0.1)
            .theta;
    alh::HyperParams hp;
    const alh::SimplexQpResult r = alh::solve_alpha(pool.state, theta, cache, hp);

    // rebuild the same Q, q to evaluate objectives
    const alh::QpProblem rep = alh::build_mmd_qp(pool.state, cache);
    Eigen::VectorXd k3(u);
    for (int i = 0; i < u; ++i)
      k3(i) = alh::informative_penalty(
          theta, cache.column(pool.state.labeled, pool.state.unlabeled[i]));
    auto value = [&](const Eigen::VectorXd& a) {
      return 0.5 * hp.beta * a.dot(rep.Q * a) +
             (hp.beta * rep.q + k3).dot(a);
    };
    const double relaxed = value(r.alpha.values);
    for (int s = 0; s < u; ++s) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(u);
      e(s) = 1.0;
      CHECK(relaxed <= value(e) + 1e-9);
    }
  }
}

TEST_CASE("selection falls back to the cold-start rule without labels") {
  alh::Rng rng(59);
  oracle::TestPool pool = oracle::make_pool(rng, 0, 7, 2, 2);
  const alh::GramCache cache(pool.X, 0.5);
  alh::HyperParams hp;
  const alh::LabelMatrix Y(0, 2);

  const alh::SelectionResult via_loop =
      alh::select_query_iral(pool.state, Y, cache, hp);
  const alh::SelectionResult cold = alh::cold_start_select(pool.state, cache, hp);
  CHECK(via_loop.pool_relative_index == cold.pool_relative_index);
  CHECK(via_loop.alpha.values == cold.alpha.values);
  CHECK(via_loop.theta.theta.size() == 0);
}

TEST_CASE("cold start picks the direct-mmd argmin") {
  alh::Rng rng(60);
  for (int trial = 0; trial < 5; ++trial) {
    const int u = 4 + static_cast<int>(rng.below(9));
    oracle::TestPool pool = oracle::make_pool(rng, 0, u, 2, 2);
    const double gamma = 0.7;
    const alh::GramCache cache(pool.X, gamma);
    alh::HyperParams hp;
    const alh::SelectionResult r = alh::cold_start_select(pool.state, cache, hp);

    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int s = 0; s < u; ++s) {
      std::vector<int> s1 = {pool.state.unlabeled[s]};
      std::vector<int> s2;
      for (int t = 0; t < u; ++t)
        if (t != s) s2.push_back(pool.state.unlabeled[t]);
      const double v = oracle::mmd_features(pool.X, s1, s2, gamma);
      if (v < best_val) {
        best_val = v;
        best = s;
      }
    }
    CHECK(r.pool_relative_index == best);
  }
}

TEST_CASE("cold start edge cases") {
  Eigen::MatrixXd x(2, 1);
  x << -1.0, 1.0;
  const alh::GramCache cache(x, 1.0);
  alh::HyperParams hp;

  alh::ActiveState sym;
  sym.unlabeled = {0, 1};
  CHECK(alh::cold_start_select(sym, cache, hp).pool_relative_index == 0);

  alh::ActiveState single;
  single.unlabeled = {1};
  const alh::SelectionResult r = alh::cold_start_select(single, cache, hp);
  CHECK(r.pool_relative_index == 0);
  CHECK(r.alpha.values(0) == 1.0);
  CHECK(r.converged);

  alh::ActiveState empty;
  CHECK_THROWS(alh::cold_start_select(empty, cache, hp));

  alh::ActiveState labeled;
  labeled.labeled = {0};
  labeled.revealed = {0};
  labeled.unlabeled = {1};
  CHECK_THROWS(alh::cold_start_select(labeled, cache, hp));
}

TEST_CASE("selection is deterministic and matches candidate enumeration") {
  alh::Rng rng(61);
  int agree = 0, trials = 12;
  for (int trial = 0; trial < trials; ++trial) {
    const int l = 2 + static_cast<int>(rng.below(4));
    const int u = 4 + static_cast<int>(rng.below(8));
    const int c = 2 + static_cast<int>(rng.below(2));
    oracle::TestPool pool = oracle::make_pool(rng, l, u, c, 2);
    const alh::GramCache cache(pool.X, 0.5);
    const alh::LabelMatrix Y = labels_for(pool.state, c);
    alh::HyperParams hp;

    const alh::SelectionResult r1 = alh::select_query_iral(pool.state, Y, cache, hp);
    const alh::SelectionResult r2 = alh::select_query_iral(pool.state, Y, cache, hp);
    CHECK(r1.pool_relative_index == r2.pool_relative_index);
    CHECK(r1.alternations == r2.alternations);
    CHECK(r1.theta.theta == r2.theta.theta);
    CHECK(r1.pool_relative_index >= 0);
    CHECK(r1.pool_relative_index < u);

    const auto [best, vals] = enumerate_selection(pool, cache, hp);
    if (r1.pool_relative_index == best) {
      ++agree;
    } else {
      const double gap = vals[r1.pool_relative_index] - vals[best];
      CHECK(gap <= 0.05 * std::abs(vals[best]));
    }
  }
  CHECK(agree >= (trials * 9) / 10);
}

TEST_CASE("single remaining candidate is returned immediately") {
  alh::Rng rng(62);
  oracle::TestPool pool = oracle::make_pool(rng, 4, 1, 2, 2);
  const alh::GramCache cache(pool.X, 0.5);
  const alh::LabelMatrix Y = labels_for(pool.state, 2);
  alh::HyperParams hp;
  const alh::SelectionResult r = alh::select_query_iral(pool.state, Y, cache, hp);
  CHECK(r.pool_relative_index == 0);
  CHECK(r.converged);
  CHECK(r.alpha.values(0) == 1.0);

  alh::ActiveState empty;
  empty.labeled = pool.state.labeled;
  empty.revealed = pool.state.revealed;
  CHECK_THROWS(alh::select_query_iral(empty, Y, cache, hp));
}

}  // TEST_SUITE
