#pragma once

#include "smcbf/qp.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace smcbf::barrier {

/// A scalar safety function h together with its Lie-derivative chain up to
/// relative degree r.
struct BarrierEvaluation {
  double h = 0.0;
  Eigen::VectorXd derivatives;      // [h, ḣ, …, h^(r−1)]
  double lie_f_r = 0.0;             // L_f^r h
  Eigen::RowVectorXd lie_g_lie_f;   // L_g L_f^(r−1) h, one entry per input

  int relative_degree() const { return static_cast<int>(derivatives.size()); }
  void validate() const;
};

/// Pole-placement gain K_b of the companion system η̇ = F_b η + G_b μ.
class EcbfPolicy {
 public:
  explicit EcbfPolicy(Eigen::RowVectorXd gain);

  const Eigen::RowVectorXd& gain() const { return gain_; }
  int relative_degree() const { return static_cast<int>(gain_.size()); }

  /// F_b − G_b K_b.
  Eigen::MatrixXd closed_loop_matrix() const;

 private:
  Eigen::RowVectorXd gain_;
};

/// F_b (shift matrix) and G_b (last unit vector) of dimension r.
Eigen::MatrixXd companion_drift(int relative_degree);
Eigen::VectorXd companion_input(int relative_degree);

/// K_b such that eig(F_b − G_b K_b) = {−pᵢ}. Accepts r ∈ {1, 2, 3} strictly
/// positive pole magnitudes.
EcbfPolicy pole_placement_gain(std::span<const double> pole_magnitudes);

/// Sliding-mode barrier policy for relative degree two.
struct SmcbfPolicy {
  double lambda = 0.0;           // sliding surface slope, 1/s
  double eta = 0.0;              // sliding condition margin
  double switching_gain = 0.0;   // K_smc
  double boundary_layer = 0.0;   // Φ
  double h_desired = 0.0;        // h_d
  double delta_max = 0.0;        // uncertainty bound on h⁽²⁾

  /// K_smc = Δ_max + η, the smallest gain meeting the sliding condition.
  static SmcbfPolicy with_minimal_gain(double lambda, double eta, double boundary_layer,
                                       double h_desired, double delta_max);

  /// Throws std::invalid_argument when any invariant fails.
  void validate() const;
};

/// a·u ≥ b.
struct LinearInputConstraint {
  Eigen::RowVectorXd row;
  double bound = 0.0;

  bool satisfied_by(const Eigen::VectorXd& u, double tolerance = 0.0) const {
    return row.dot(u) >= bound - tolerance;
  }
};

/// Relative-degree-one CBF with linear class-κ function α(h) = alpha_gain·h:
/// L_g h·u ≥ −L_f h − alpha_gain·h.
LinearInputConstraint cbf_constraint_r1(const BarrierEvaluation& ev, double alpha_gain);

/// ECBF row after eliminating the virtual input μ_b:
/// L_gL_f^(r−1)h·u ≥ −L_f^r h − K_b η_b.
LinearInputConstraint ecbf_constraint(const BarrierEvaluation& ev, const EcbfPolicy& policy);

/// Saturation used in place of sgn inside the boundary layer.
double sat(double z);

/// S = ḣ + λ(h − h_d) for constant h_d.
double sliding_surface(const BarrierEvaluation& ev, const SmcbfPolicy& policy);

/// μ̄_b − K_smc·sat(S/Φ) with μ̄_b = −λḣ.
double smcbf_virtual_bound(const BarrierEvaluation& ev, const SmcbfPolicy& policy);

/// SMCBF row after eliminating μ_b: L_gL_f h·u ≥ μ_lo − L_f²h.
LinearInputConstraint smcbf_constraint(const BarrierEvaluation& ev, const SmcbfPolicy& policy);

/// H = 2I, c = −2u_no and the stacked rows, i.e. minimize ‖u − u_no‖².
qp::QpProblem assemble_filter_qp(const Eigen::VectorXd& u_nominal,
                                 std::span<const LinearInputConstraint> constraints);

/// Rows with ‖a‖ below this are treated as input-independent.
inline constexpr double kDegenerateRowNorm = 1e-12;

struct FilterResult {
  Eigen::VectorXd u;
  qp::QpStatus status = qp::QpStatus::kConverged;
  int iterations = 0;
  bool fallback = false;        // u_no passed through because the QP failed
  int dropped_rows = 0;         // degenerate rows with b ≤ 0
  std::vector<bool> active;     // per input constraint, binding at u
};

/// Safety filter: drops degenerate rows that hold vacuously, solves the QP
/// with Hildreth, and passes u_no through (fallback = true) when a
/// degenerate row is unsatisfiable or the solver does not converge.
FilterResult filter_input(const Eigen::VectorXd& u_nominal,
                          std::span<const LinearInputConstraint> constraints,
                          const qp::HildrethSettings& settings = {});

struct SlidingConditionReport {
  int checked_samples = 0;   // samples with |S| > Φ
  int violations = 0;        // of which residual > 0
  double max_residual = 0.0; // over checked samples; −inf if none
};

/// Discrete check of ½ d/dt S² ≤ −η|S| on a uniformly sampled trace:
/// residual_k = ½(S²_{k+1} − S²_k)/Δt + η|S_k| for every k with |S_k| > Φ.
SlidingConditionReport check_sliding_condition(std::span<const double> sliding_trace,
                                               double dt, double eta, double boundary_layer);

}  // namespace smcbf::barrier
