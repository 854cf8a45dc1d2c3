#include "smcbf/qp.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using smcbf::qp::QpProblem;
using smcbf::qp::QpStatus;

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Random SPD Hessian and a constraint set known to contain `inside`.
QpProblem random_feasible(std::mt19937& rng, int n, int k) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> slack(0.0, 1.0);
  Eigen::MatrixXd l(n, n);
  for (auto& v : l.reshaped()) v = normal(rng);
  const Eigen::MatrixXd h = l * l.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd c(n), inside(n);
  for (auto& v : c) v = 3.0 * normal(rng);
  for (auto& v : inside) v = normal(rng);
  Eigen::MatrixXd m(k, n);
  for (auto& v : m.reshaped()) v = normal(rng);
  Eigen::VectorXd gamma = m * inside;
  for (auto& v : gamma) v -= slack(rng);
  return QpProblem(h, c, m, gamma);
}

TEST(QpProblem, RejectsBadInput) {
  EXPECT_THROW(QpProblem(mat({{1, 0}, {0, -1}}), vec({0, 0})), std::invalid_argument);
  EXPECT_THROW(QpProblem(mat({{1, 0.5}, {0, 1}}), vec({0, 0})), std::invalid_argument);
  EXPECT_THROW(QpProblem(mat({{1, 0}, {0, 1}}), vec({0})), std::invalid_argument);
  EXPECT_THROW(QpProblem(mat({{1, 0}, {0, 1}}), vec({0, 0}), mat({{1, 2, 3}}), vec({1})),
               std::invalid_argument);
  EXPECT_THROW(QpProblem(mat({{1}}), vec({std::numeric_limits<double>::quiet_NaN()})),
               std::invalid_argument);
}

TEST(Hildreth, UnconstrainedReturnsMinimizer) {
  const QpProblem p(2.0 * Eigen::MatrixXd::Identity(2, 2), vec({-2, -2}));
  const auto s = smcbf::qp::solve_hildreth(p);
  EXPECT_EQ(s.status, QpStatus::kConverged);
  EXPECT_DOUBLE_EQ(s.u_star(0), 1.0);
  EXPECT_DOUBLE_EQ(s.u_star(1), 1.0);
}

TEST(Hildreth, SingleActiveConstraint) {
  const QpProblem p(mat({{2}}), vec({-2}), mat({{1}}), vec({2}));
  const auto s = smcbf::qp::solve_hildreth(p);
  ASSERT_EQ(s.status, QpStatus::kConverged);
  EXPECT_NEAR(s.u_star(0), 2.0, 1e-12);
  EXPECT_NEAR(s.multipliers(0), 2.0, 1e-12);

  const auto o = smcbf::qp::solve_active_set_oracle(p);
  EXPECT_NEAR(o.u_star(0), 2.0, 1e-12);
}

TEST(Hildreth, InactiveConstraintLeavesMinimizerUntouched) {
  const QpProblem p(2.0 * Eigen::MatrixXd::Identity(2, 2), vec({-0.6, 0.2}), mat({{1, 1}}),
                    vec({-5}));
  const auto s = smcbf::qp::solve_hildreth(p);
  EXPECT_EQ(s.status, QpStatus::kConverged);
  EXPECT_EQ(s.multipliers(0), 0.0);
  EXPECT_EQ(s.u_star, p.unconstrained_minimizer());
}

TEST(Hildreth, ZeroRowWithPositiveBoundIsInfeasible) {
  const QpProblem p(mat({{2}}), vec({0}), mat({{0}}), vec({1}));
  EXPECT_EQ(smcbf::qp::solve_hildreth(p).status, QpStatus::kInfeasibleDetected);
}

TEST(Hildreth, ContradictoryRowsAreNotReportedConverged) {
  const QpProblem p(mat({{2}}), vec({0}), mat({{1}, {-1}}), vec({1, 1}));
  smcbf::qp::HildrethSettings settings;
  settings.max_iterations = 2000;
  const auto s = smcbf::qp::solve_hildreth(p, settings);
  EXPECT_NE(s.status, QpStatus::kConverged);
  EXPECT_EQ(smcbf::qp::solve_active_set_oracle(p).status, QpStatus::kInfeasibleDetected);
}

TEST(Hildreth, MaxIterationsReported) {
  // Strongly coupled rows converge slowly; one sweep is not enough.
  const QpProblem p(2.0 * Eigen::MatrixXd::Identity(2, 2), vec({0, 0}),
                    mat({{1, 0.999}, {1, 1.001}}), vec({1, 1}));
  smcbf::qp::HildrethSettings settings;
  settings.max_iterations = 1;
  EXPECT_EQ(smcbf::qp::solve_hildreth(p, settings).status, QpStatus::kMaxIterations);
}

TEST(Hildreth, MatchesOracleOnRandomProblems) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const QpProblem p = random_feasible(rng, 3, 4);
    const auto h = smcbf::qp::solve_hildreth(p);
    const auto o = smcbf::qp::solve_active_set_oracle(p);
    ASSERT_EQ(h.status, QpStatus::kConverged) << "trial " << trial;
    ASSERT_EQ(o.status, QpStatus::kConverged) << "trial " << trial;
    EXPECT_NEAR(p.objective(h.u_star), p.objective(o.u_star), 1e-6) << "trial " << trial;
    EXPECT_LE((h.u_star - o.u_star).norm(), 1e-5) << "trial " << trial;

    const auto kkt = smcbf::qp::kkt_residuals(p, h);
    EXPECT_LE(kkt.stationarity, 1e-6);
    EXPECT_LE(kkt.primal_infeasibility, 1e-6);
    EXPECT_EQ(kkt.dual_infeasibility, 0.0);
    EXPECT_LE(kkt.complementarity, 1e-6);
  }
}

TEST(Hildreth, DualObjectiveIsNonDecreasingAcrossSweeps) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const QpProblem p = random_feasible(rng, 3, 4);
    double previous = -std::numeric_limits<double>::infinity();
    for (int sweeps = 1; sweeps <= 30; ++sweeps) {
      smcbf::qp::HildrethSettings settings;
      settings.max_iterations = sweeps;
      const auto s = smcbf::qp::solve_hildreth(p, settings);
      ASSERT_TRUE((s.multipliers.array() >= 0.0).all());
      const double psi = smcbf::qp::dual_objective(p, s.multipliers);
      EXPECT_GE(psi, previous - 1e-9);
      previous = psi;
    }
    const auto s = smcbf::qp::solve_hildreth(p);
    EXPECT_NEAR(smcbf::qp::dual_objective(p, s.multipliers), p.objective(s.u_star), 1e-6);
  }
}

TEST(ActiveSetOracle, EmptyFeasibleSet) {
  const QpProblem p(mat({{2}}), vec({0}), mat({{1}, {-1}}), vec({1, 1}));
  EXPECT_EQ(smcbf::qp::solve_active_set_oracle(p).status, QpStatus::kInfeasibleDetected);
}

TEST(ActiveSetOracle, UnconstrainedCase) {
  const QpProblem p(2.0 * Eigen::MatrixXd::Identity(2, 2), vec({-2, -2}));
  const auto o = smcbf::qp::solve_active_set_oracle(p);
  EXPECT_NEAR(o.u_star(0), 1.0, 1e-12);
  EXPECT_NEAR(o.u_star(1), 1.0, 1e-12);
}

}  // namespace
