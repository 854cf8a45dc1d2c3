#pragma once

#include "smcbf/barrier.hpp"

#include <Eigen/Dense>

namespace smcbf::plants {

/// Physical parameters of the rotary inverted pendulum. Lengths l0, l1 are
/// half-lengths of the arm and pendulum.
///
/// The motor torque is τ = (K_t/R_m)(duty_to_volts·V_m − K_e θ̇0) with the
/// duty cycle V_m ∈ [−1, 1]. duty_to_volts = 12 reproduces the published
/// input matrix B. The viscous damping defaults are a fit to the published
/// state matrix (see fit_furuta_damping).
struct FurutaParams {
  double arm_mass = 0.393;               // m0, kg
  double pendulum_mass = 0.068;          // m1, kg
  double arm_half_length = 0.365 / 2;    // l0, m
  double pendulum_half_length = 0.207 / 2;  // l1, m
  double arm_radius = 0.210;             // r, axis to pendulum base, m
  double arm_com_offset = 0.022;         // d, m
  double gravity = 9.81;                 // m/s²
  double torque_constant = 0.02;         // K_t, Nm/A
  double back_emf_constant = 0.08;       // K_e, Vs/rad
  double armature_resistance = 2.4;      // R_m, Ω
  double duty_to_volts = 12.0;           // V per unit duty
  double arm_damping = 1.0007580723e-4;      // b0, Nms/rad
  double pendulum_damping = 1.0339818865e-6; // b1, Nms/rad

  double arm_inertia() const;       // I0 = m0(2l0)²/12 + m0 d²
  double pendulum_inertia() const;  // I1 = m1(2l1)²/12

  void validate() const;
};

/// State index layout [θ0, θ1, θ̇0, θ̇1].
namespace furuta_index {
inline constexpr int kArmAngle = 0;
inline constexpr int kPendulumAngle = 1;
inline constexpr int kArmRate = 2;
inline constexpr int kPendulumRate = 3;
}  // namespace furuta_index

using FurutaState = Eigen::Vector4d;

/// Duty limit applied at the plant input.
inline constexpr double kFurutaDutyLimit = 1.0;

/// Nonlinear state derivative. The duty cycle is clamped to [−1, 1].
FurutaState furuta_dynamics(const FurutaState& x, double duty, const FurutaParams& p);

/// 2×2 mass matrix M(θ1) of the Euler–Lagrange equations.
Eigen::Matrix2d furuta_mass_matrix(double pendulum_angle, const FurutaParams& p);

/// K0 + K1 + P.
double furuta_energy(const FurutaState& x, const FurutaParams& p);

struct LinearModel {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
};

/// Analytic Jacobians at the upright equilibrium x* = 0, u = 0.
LinearModel furuta_linearize(const FurutaParams& p);

/// Least-squares fit of (b0, b1) to the damping-dependent entries
/// A(2,2), A(3,2) (b0) and A(2,3), A(3,3) (b1) of a reference state matrix.
/// Residuals are relative, so small entries weigh as much as large ones.
struct DampingFit {
  double arm_damping = 0.0;
  double pendulum_damping = 0.0;
  Eigen::Vector4d relative_residuals;  // A22, A32, A23, A33
};

DampingFit fit_furuta_damping(const FurutaParams& p, const Eigen::Matrix4d& reference_a);

/// h = θ1max² − θ1² with Lie derivatives along the linear model ẋ = Ax + Bu.
barrier::BarrierEvaluation furuta_barrier(const FurutaState& x, double theta1_max,
                                          const LinearModel& model);

}  // namespace smcbf::plants
