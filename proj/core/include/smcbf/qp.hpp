#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace smcbf::qp {

/// Strictly convex QP
///
///     minimize    ½ uᵀ H u + cᵀ u
///     subject to  M u ≥ γ
///
/// H must be symmetric positive definite. The constructor validates shapes,
/// symmetry and definiteness and throws std::invalid_argument otherwise.
class QpProblem {
 public:
  QpProblem(Eigen::MatrixXd hessian, Eigen::VectorXd linear_term,
            Eigen::MatrixXd constraint_matrix, Eigen::VectorXd constraint_bound);

  /// Problem without inequality rows.
  QpProblem(Eigen::MatrixXd hessian, Eigen::VectorXd linear_term);

  const Eigen::MatrixXd& hessian() const { return hessian_; }
  const Eigen::VectorXd& linear_term() const { return linear_term_; }
  const Eigen::MatrixXd& constraint_matrix() const { return constraint_matrix_; }
  const Eigen::VectorXd& constraint_bound() const { return constraint_bound_; }
  const Eigen::LLT<Eigen::MatrixXd>& hessian_factor() const { return factor_; }

  Eigen::Index num_variables() const { return hessian_.rows(); }
  Eigen::Index num_constraints() const { return constraint_matrix_.rows(); }

  double objective(const Eigen::VectorXd& u) const;

  /// −H⁻¹c.
  Eigen::VectorXd unconstrained_minimizer() const;

 private:
  Eigen::MatrixXd hessian_;
  Eigen::VectorXd linear_term_;
  Eigen::MatrixXd constraint_matrix_;
  Eigen::VectorXd constraint_bound_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
};

enum class QpStatus { kConverged, kMaxIterations, kInfeasibleDetected };

std::string_view to_string(QpStatus status);

struct QpSolution {
  Eigen::VectorXd u_star;
  Eigen::VectorXd multipliers;
  int iterations = 0;
  QpStatus status = QpStatus::kConverged;
};

struct HildrethSettings {
  double tolerance = 1e-9;
  int max_iterations = 10'000;
  // Dual norm above which a non-converged run is reported as infeasible.
  double divergence_threshold = 1e9;
};

/// Hildreth's dual coordinate descent. Sweeps the constraints in order and
/// updates one multiplier at a time with projection onto λ ≥ 0, using
/// G = M H⁻¹ Mᵀ and d = γ + M H⁻¹ c. Converged means the largest multiplier
/// change during one sweep is ≤ tolerance.
QpSolution solve_hildreth(const QpProblem& problem,
                          const HildrethSettings& settings = {});

/// Dual objective ψ(λ) = −½ λᵀGλ + λᵀd − ½ cᵀH⁻¹c. Equals the primal
/// objective at the optimum and is non-decreasing along Hildreth sweeps.
double dual_objective(const QpProblem& problem, const Eigen::VectorXd& multipliers);

/// Exact KKT point by enumerating every active set (k ≤ 20). Test oracle.
QpSolution solve_active_set_oracle(const QpProblem& problem);

struct KktResiduals {
  double stationarity = 0.0;         // ‖Hu + c − Mᵀλ‖∞
  double primal_infeasibility = 0.0; // max(0, γ − Mu)∞
  double dual_infeasibility = 0.0;   // max(0, −λ)∞
  double complementarity = 0.0;      // max |λᵢ (Mᵢu − γᵢ)|
};

KktResiduals kkt_residuals(const QpProblem& problem, const QpSolution& solution);

}  // namespace smcbf::qp
