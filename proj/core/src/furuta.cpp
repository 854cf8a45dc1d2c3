#include "smcbf/furuta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace smcbf::plants {

using namespace furuta_index;

double FurutaParams::arm_inertia() const {
  const double length = 2.0 * arm_half_length;
  return arm_mass * length * length / 12.0 + arm_mass * arm_com_offset * arm_com_offset;
}

double FurutaParams::pendulum_inertia() const {
  const double length = 2.0 * pendulum_half_length;
  return pendulum_mass * length * length / 12.0;
}

void FurutaParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("FurutaParams: ") + name + " must be > 0");
  };
  positive(arm_mass, "arm_mass");
  positive(pendulum_mass, "pendulum_mass");
  positive(arm_half_length, "arm_half_length");
  positive(pendulum_half_length, "pendulum_half_length");
  positive(arm_radius, "arm_radius");
  positive(gravity, "gravity");
  positive(armature_resistance, "armature_resistance");
  positive(duty_to_volts, "duty_to_volts");
  if (!(arm_com_offset >= 0.0)) throw std::invalid_argument("FurutaParams: arm_com_offset must be >= 0");
  if (!(arm_damping >= 0.0) || !(pendulum_damping >= 0.0))
    throw std::invalid_argument("FurutaParams: damping must be >= 0");
}

Eigen::Matrix2d furuta_mass_matrix(double pendulum_angle, const FurutaParams& p) {
  const double m1 = p.pendulum_mass;
  const double l1 = p.pendulum_half_length;
  const double r = p.arm_radius;
  const double s = std::sin(pendulum_angle);
  Eigen::Matrix2d m;
  m(0, 0) = p.arm_inertia() + m1 * r * r + m1 * l1 * l1 * s * s;
  m(0, 1) = m1 * r * l1 * std::cos(pendulum_angle);
  m(1, 0) = m(0, 1);
  m(1, 1) = p.pendulum_inertia() + m1 * l1 * l1;
  return m;
}

FurutaState furuta_dynamics(const FurutaState& x, double duty, const FurutaParams& p) {
  const double m1 = p.pendulum_mass;
  const double l1 = p.pendulum_half_length;
  const double r = p.arm_radius;
  const double theta1 = x(kPendulumAngle);
  const double w0 = x(kArmRate);
  const double w1 = x(kPendulumRate);
  const double s = std::sin(theta1);
  const double c = std::cos(theta1);

  const double v = std::clamp(duty, -kFurutaDutyLimit, kFurutaDutyLimit);
  const double torque =
      p.torque_constant / p.armature_resistance * (p.duty_to_volts * v - p.back_emf_constant * w0);

  // Euler–Lagrange: M(θ1) θ̈ = Q − (velocity-product terms) + gravity.
  Eigen::Vector2d rhs;
  rhs(0) = torque - p.arm_damping * w0 - 2.0 * m1 * l1 * l1 * s * c * w0 * w1 +
           m1 * r * l1 * s * w1 * w1;
  rhs(1) = -p.pendulum_damping * w1 + m1 * l1 * l1 * s * c * w0 * w0 + m1 * p.gravity * l1 * s;

  const Eigen::Matrix2d mass = furuta_mass_matrix(theta1, p);
  const double det = mass.determinant();
  if (!(det > 0.0)) throw std::logic_error("furuta_dynamics: singular mass matrix");
  const Eigen::Vector2d accel = mass.inverse() * rhs;

  FurutaState dx;
  dx << w0, w1, accel(0), accel(1);
  return dx;
}

double furuta_energy(const FurutaState& x, const FurutaParams& p) {
  const double m1 = p.pendulum_mass;
  const double l1 = p.pendulum_half_length;
  const double r = p.arm_radius;
  const double theta1 = x(kPendulumAngle);
  const double w0 = x(kArmRate);
  const double w1 = x(kPendulumRate);
  const double s = std::sin(theta1);
  const double arm = 0.5 * p.arm_inertia() * w0 * w0;
  const double pendulum =
      0.5 * p.pendulum_inertia() * w1 * w1 +
      0.5 * m1 *
          (l1 * l1 * w1 * w1 + r * r * w0 * w0 + l1 * l1 * w0 * w0 * s * s +
           2.0 * r * l1 * w0 * w1 * std::cos(theta1));
  const double potential = m1 * p.gravity * l1 * std::cos(theta1);
  return arm + pendulum + potential;
}

namespace {

struct LinearCoefficients {
  Eigen::Matrix2d mass_inverse;
  double gravity_stiffness;  // m1 g l1
  double arm_friction;       // K_t K_e / R_m + b0
  double input_gain;         // K_t · duty_to_volts / R_m
};

LinearCoefficients linear_coefficients(const FurutaParams& p) {
  return {furuta_mass_matrix(0.0, p).inverse(),
          p.pendulum_mass * p.gravity * p.pendulum_half_length,
          p.torque_constant * p.back_emf_constant / p.armature_resistance + p.arm_damping,
          p.torque_constant * p.duty_to_volts / p.armature_resistance};
}

}  // namespace

LinearModel furuta_linearize(const FurutaParams& p) {
  p.validate();
  const LinearCoefficients k = linear_coefficients(p);
  const Eigen::Matrix2d& mi = k.mass_inverse;
  LinearModel model{Eigen::MatrixXd::Zero(4, 4), Eigen::MatrixXd::Zero(4, 1)};
  model.a(kArmAngle, kArmRate) = 1.0;
  model.a(kPendulumAngle, kPendulumRate) = 1.0;
  for (int row = 0; row < 2; ++row) {
    model.a(kArmRate + row, kPendulumAngle) = mi(row, 1) * k.gravity_stiffness;
    model.a(kArmRate + row, kArmRate) = -mi(row, 0) * k.arm_friction;
    model.a(kArmRate + row, kPendulumRate) = -mi(row, 1) * p.pendulum_damping;
    model.b(kArmRate + row, 0) = mi(row, 0) * k.input_gain;
  }
  return model;
}

DampingFit fit_furuta_damping(const FurutaParams& p, const Eigen::Matrix4d& reference_a) {
  const Eigen::Matrix2d mi = linear_coefficients(p).mass_inverse;
  // Model entries are linear in one coefficient each: A(2+i, 2) = −Mi(i,0)·c0,
  // A(2+i, 3) = −Mi(i,1)·b1. Minimize Σ(model/reference − 1)².
  auto fit = [](const Eigen::Vector2d& slope, const Eigen::Vector2d& target) {
    const Eigen::Vector2d w = slope.cwiseQuotient(target);
    return w.sum() / w.squaredNorm();
  };
  const Eigen::Vector2d friction_slope(-mi(0, 0), -mi(1, 0));
  const Eigen::Vector2d friction_target(reference_a(2, 2), reference_a(3, 2));
  const Eigen::Vector2d damping_slope(-mi(0, 1), -mi(1, 1));
  const Eigen::Vector2d damping_target(reference_a(2, 3), reference_a(3, 3));

  const double c0 = fit(friction_slope, friction_target);
  DampingFit result;
  result.arm_damping = c0 - p.torque_constant * p.back_emf_constant / p.armature_resistance;
  result.pendulum_damping = fit(damping_slope, damping_target);
  result.relative_residuals << friction_slope(0) * c0 / friction_target(0) - 1.0,
      friction_slope(1) * c0 / friction_target(1) - 1.0,
      damping_slope(0) * result.pendulum_damping / damping_target(0) - 1.0,
      damping_slope(1) * result.pendulum_damping / damping_target(1) - 1.0;
  return result;
}

barrier::BarrierEvaluation furuta_barrier(const FurutaState& x, double theta1_max,
                                          const LinearModel& model) {
  const double theta1 = x(kPendulumAngle);
  const double rate1 = x(kPendulumRate);
  const double accel1_drift = model.a.row(kPendulumRate).dot(x);
  const double accel1_input = model.b(kPendulumRate, 0);

  barrier::BarrierEvaluation ev;
  ev.h = theta1_max * theta1_max - theta1 * theta1;
  ev.derivatives.resize(2);
  ev.derivatives << ev.h, -2.0 * theta1 * rate1;
  ev.lie_f_r = -2.0 * rate1 * rate1 - 2.0 * theta1 * accel1_drift;
  ev.lie_g_lie_f.resize(1);
  ev.lie_g_lie_f(0) = -2.0 * theta1 * accel1_input;
  return ev;
}

}  // namespace smcbf::plants
