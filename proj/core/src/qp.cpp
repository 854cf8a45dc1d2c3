#include "smcbf/qp.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace smcbf::qp {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument("QpProblem: " + message);
}

}  // namespace

QpProblem::QpProblem(Eigen::MatrixXd hessian, Eigen::VectorXd linear_term,
                     Eigen::MatrixXd constraint_matrix, Eigen::VectorXd constraint_bound)
    : hessian_(std::move(hessian)),
      linear_term_(std::move(linear_term)),
      constraint_matrix_(std::move(constraint_matrix)),
      constraint_bound_(std::move(constraint_bound)) {
  const Eigen::Index n = hessian_.rows();
  require(n > 0, "empty hessian");
  require(hessian_.cols() == n, "hessian is not square");
  require(linear_term_.size() == n, "linear term size does not match hessian");
  require(constraint_matrix_.rows() == constraint_bound_.size(),
          "constraint matrix rows do not match bound size");
  require(constraint_matrix_.rows() == 0 || constraint_matrix_.cols() == n,
          "constraint matrix columns do not match hessian");
  if (constraint_matrix_.rows() == 0) constraint_matrix_.resize(0, n);
  require(hessian_.allFinite() && linear_term_.allFinite() &&
              constraint_matrix_.allFinite() && constraint_bound_.allFinite(),
          "non-finite entries");
  require((hessian_ - hessian_.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTolerance,
          "hessian is not symmetric");
  factor_.compute(hessian_);
  require(factor_.info() == Eigen::Success, "hessian is not positive definite");
}

QpProblem::QpProblem(Eigen::MatrixXd hessian, Eigen::VectorXd linear_term)
    : QpProblem(hessian, std::move(linear_term), Eigen::MatrixXd(0, hessian.rows()),
                Eigen::VectorXd(0)) {}

double QpProblem::objective(const Eigen::VectorXd& u) const {
  return 0.5 * u.dot(hessian_ * u) + linear_term_.dot(u);
}

Eigen::VectorXd QpProblem::unconstrained_minimizer() const {
  return -factor_.solve(linear_term_);
}

std::string_view to_string(QpStatus status) {
  switch (status) {
    case QpStatus::kConverged: return "converged";
    case QpStatus::kMaxIterations: return "max_iterations";
    case QpStatus::kInfeasibleDetected: return "infeasible_detected";
  }
  return "unknown";
}

QpSolution solve_hildreth(const QpProblem& problem, const HildrethSettings& settings) {
  if (!(settings.tolerance > 0.0)) throw std::invalid_argument("solve_hildreth: tolerance must be > 0");
  if (settings.max_iterations < 1) throw std::invalid_argument("solve_hildreth: max_iterations must be >= 1");

  const Eigen::Index k = problem.num_constraints();
  const Eigen::MatrixXd& m = problem.constraint_matrix();
  const Eigen::VectorXd& gamma = problem.constraint_bound();

  QpSolution solution;
  solution.u_star = problem.unconstrained_minimizer();
  solution.multipliers = Eigen::VectorXd::Zero(k);
  if (k == 0) return solution;

  // A zero row can only be satisfied if its bound is non-positive.
  for (Eigen::Index i = 0; i < k; ++i) {
    if (m.row(i).isZero(0.0) && gamma(i) > 0.0) {
      solution.status = QpStatus::kInfeasibleDetected;
      return solution;
    }
  }

  const Eigen::MatrixXd hinv_mt = problem.hessian_factor().solve(m.transpose());
  const Eigen::MatrixXd g = m * hinv_mt;
  const Eigen::VectorXd d = gamma - m * solution.u_star;  // γ + M H⁻¹ c

  Eigen::VectorXd& lambda = solution.multipliers;
  solution.status = QpStatus::kMaxIterations;
  for (int sweep = 1; sweep <= settings.max_iterations; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (g(i, i) <= 0.0) continue;  // zero row with γᵢ ≤ 0, vacuous
      const double w = lambda(i) + (d(i) - g.row(i).dot(lambda)) / g(i, i);
      const double updated = std::max(0.0, w);
      max_change = std::max(max_change, std::abs(updated - lambda(i)));
      lambda(i) = updated;
    }
    solution.iterations = sweep;
    if (max_change <= settings.tolerance) {
      solution.status = QpStatus::kConverged;
      break;
    }
  }
  if (solution.status == QpStatus::kMaxIterations &&
      lambda.norm() > settings.divergence_threshold) {
    solution.status = QpStatus::kInfeasibleDetected;
  }
  if (!lambda.isZero(0.0)) solution.u_star += hinv_mt * lambda;
  return solution;
}

double dual_objective(const QpProblem& problem, const Eigen::VectorXd& multipliers) {
  const Eigen::VectorXd u0 = problem.unconstrained_minimizer();
  const Eigen::MatrixXd& m = problem.constraint_matrix();
  const Eigen::MatrixXd hinv_mt = problem.hessian_factor().solve(m.transpose());
  const Eigen::MatrixXd g = m * hinv_mt;
  const Eigen::VectorXd d = problem.constraint_bound() - m * u0;
  const double offset = 0.5 * problem.linear_term().dot(u0);  // −½ cᵀH⁻¹c
  return -0.5 * multipliers.dot(g * multipliers) + multipliers.dot(d) + offset;
}

QpSolution solve_active_set_oracle(const QpProblem& problem) {
  const Eigen::Index n = problem.num_variables();
  const Eigen::Index k = problem.num_constraints();
  if (k > 20) throw std::invalid_argument("solve_active_set_oracle: more than 20 constraints");

  const Eigen::MatrixXd& h = problem.hessian();
  const Eigen::MatrixXd& m = problem.constraint_matrix();
  const Eigen::VectorXd& gamma = problem.constraint_bound();
  constexpr double kFeasTol = 1e-9;

  QpSolution best;
  best.status = QpStatus::kInfeasibleDetected;
  best.u_star = problem.unconstrained_minimizer();
  best.multipliers = Eigen::VectorXd::Zero(k);
  double best_objective = std::numeric_limits<double>::infinity();

  const std::uint32_t subsets = 1u << k;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < k; ++i)
      if (mask & (1u << i)) active.push_back(i);
    const auto a = static_cast<Eigen::Index>(active.size());
    if (a > n) continue;

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + a, n + a);
    Eigen::VectorXd rhs(n + a);
    kkt.topLeftCorner(n, n) = h;
    rhs.head(n) = -problem.linear_term();
    for (Eigen::Index j = 0; j < a; ++j) {
      kkt.block(0, n + j, n, 1) = -m.row(active[j]).transpose();
      kkt.block(n + j, 0, 1, n) = m.row(active[j]);
      rhs(n + j) = gamma(active[j]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd z = lu.solve(rhs);
    const Eigen::VectorXd u = z.head(n);

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(k);
    bool valid = true;
    for (Eigen::Index j = 0; j < a && valid; ++j) {
      lambda(active[j]) = z(n + j);
      valid = z(n + j) >= -kFeasTol;
    }
    const double scale = 1.0 + (k > 0 ? gamma.cwiseAbs().maxCoeff() : 0.0);
    if (!valid || ((m * u - gamma).array() < -kFeasTol * scale).any()) continue;

    const double objective = problem.objective(u);
    if (objective < best_objective) {
      best_objective = objective;
      best.u_star = u;
      best.multipliers = lambda.cwiseMax(0.0);
      best.status = QpStatus::kConverged;
    }
  }
  best.iterations = static_cast<int>(subsets);
  return best;
}

KktResiduals kkt_residuals(const QpProblem& problem, const QpSolution& solution) {
  const Eigen::MatrixXd& m = problem.constraint_matrix();
  const Eigen::VectorXd& lambda = solution.multipliers;
  const Eigen::VectorXd& u = solution.u_star;
  KktResiduals r;
  r.stationarity = (problem.hessian() * u + problem.linear_term() - m.transpose() * lambda)
                       .cwiseAbs()
                       .maxCoeff();
  if (m.rows() == 0) return r;
  const Eigen::VectorXd slack = m * u - problem.constraint_bound();
  r.primal_infeasibility = (-slack).cwiseMax(0.0).maxCoeff();
  r.dual_infeasibility = (-lambda).cwiseMax(0.0).maxCoeff();
  r.complementarity = lambda.cwiseProduct(slack).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace smcbf::qp
