#pragma once

#include "smcbf/barrier.hpp"

#include <Eigen/Dense>

namespace smcbf::plants {

/// Y-shaped plate levitated by three electromagnets.
struct MaglevParams {
  double l1g = 0.306;          // m
  double l2g = 0.203;          // m
  double l3g = 0.120;          // m
  double mass = 1.93;          // M, kg
  double gravity = 9.81;       // m/s²
  double pitch_inertia = 6.43e-2;  // J_pm, kg·m²
  double roll_inertia = 1.82e-2;   // J_rm, kg·m²
  double k1 = 3.70e-4;         // N·m²/V²
  double k2 = 1.03e-4;
  double k3 = 1.36e-4;
  double com_offset = 3.24e-3; // d_ml, m

  Eigen::Vector3d magnet_constants() const { return {k1, k2, k3}; }
  void validate() const;
};

/// State layout [x_v, θ_p, θ_r, ẋ_v, θ̇_p, θ̇_r]; input [F1, F2, F3] in N.
using MaglevState = Eigen::Matrix<double, 6, 1>;

/// Angles at or beyond this magnitude are rejected (tan singularity).
inline constexpr double kMaglevAngleLimit = 1.5;

/// Configuration accelerations q̈ = f_acc(x) + G_acc·F for q = (x_v, θ_p, θ_r).
Eigen::Vector3d maglev_drift_acceleration(const MaglevState& x, const MaglevParams& p);
Eigen::Matrix3d maglev_input_acceleration(const MaglevParams& p);

MaglevState maglev_dynamics(const MaglevState& x, const Eigen::Vector3d& forces,
                            const MaglevParams& p);

/// Gap positions r1, r2, r3.
Eigen::Vector3d maglev_output(const MaglevState& x, const MaglevParams& p);

/// ∂r/∂q.
Eigen::Matrix3d maglev_output_jacobian(const MaglevState& x, const MaglevParams& p);

/// ṙ.
Eigen::Vector3d maglev_output_rate(const MaglevState& x, const MaglevParams& p);

/// r̈ = f_y(x) + g_y(x)·F.
struct OutputDynamics {
  Eigen::Vector3d drift;
  Eigen::Matrix3d input;
};

OutputDynamics maglev_output_dynamics(const MaglevState& x, const MaglevParams& p);

/// h_j = r_max² − (r_j − r_center)², j ∈ {0, 1, 2}, with Lie derivatives
/// taken through the output dynamics of the supplied (controller-side) model.
barrier::BarrierEvaluation maglev_barrier(const MaglevState& x, int j, double r_max,
                                          double r_center, const MaglevParams& p);

/// V_j = |r_j|·sqrt(F_j/k_j). Throws for negative forces or zero gaps.
Eigen::Vector3d maglev_force_to_voltage(const Eigen::Vector3d& forces,
                                        const Eigen::Vector3d& gaps, const MaglevParams& p);

/// F_j = k_j (V_j / r_j)².
Eigen::Vector3d maglev_voltage_to_force(const Eigen::Vector3d& voltages,
                                        const Eigen::Vector3d& gaps, const MaglevParams& p);

}  // namespace smcbf::plants
