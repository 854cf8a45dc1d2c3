#include "smcbf/maglev.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace smcbf::plants {

void MaglevParams::validate() const {
  const double values[] = {l1g, l2g, l3g, mass, gravity, pitch_inertia, roll_inertia,
                           k1,  k2,  k3,  com_offset};
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("MaglevParams: all parameters must be > 0");
}

namespace {

void check_angles(const MaglevState& x) {
  if (!(std::abs(x(1)) < kMaglevAngleLimit) || !(std::abs(x(2)) < kMaglevAngleLimit))
    throw std::domain_error("maglev: plate angle too close to the tan singularity");
}

double sec2(double angle) {
  const double c = std::cos(angle);
  return 1.0 / (c * c);
}

}  // namespace

Eigen::Vector3d maglev_drift_acceleration(const MaglevState& x, const MaglevParams& p) {
  const double gravity_moment = p.mass * p.gravity * p.com_offset;
  return {p.gravity, -gravity_moment * std::sin(x(1)) / p.pitch_inertia,
          -gravity_moment * std::sin(x(2)) / p.roll_inertia};
}

Eigen::Matrix3d maglev_input_acceleration(const MaglevParams& p) {
  Eigen::Matrix3d g;
  g << -1.0 / p.mass, -1.0 / p.mass, -1.0 / p.mass,
      p.l1g / p.pitch_inertia, -p.l2g / p.pitch_inertia, -p.l2g / p.pitch_inertia,
      0.0, p.l3g / p.roll_inertia, -p.l3g / p.roll_inertia;
  return g;
}

MaglevState maglev_dynamics(const MaglevState& x, const Eigen::Vector3d& forces,
                            const MaglevParams& p) {
  MaglevState dx;
  dx.head<3>() = x.tail<3>();
  dx.tail<3>() = maglev_drift_acceleration(x, p) + maglev_input_acceleration(p) * forces;
  return dx;
}

Eigen::Vector3d maglev_output(const MaglevState& x, const MaglevParams& p) {
  check_angles(x);
  const double tp = std::tan(x(1));
  const double tr = std::tan(x(2));
  return {x(0) - p.l1g * tp, x(0) + p.l2g * tp - p.l3g * tr, x(0) + p.l2g * tp + p.l3g * tr};
}

Eigen::Matrix3d maglev_output_jacobian(const MaglevState& x, const MaglevParams& p) {
  check_angles(x);
  const double sp = sec2(x(1));
  const double sr = sec2(x(2));
  Eigen::Matrix3d j;
  j << 1.0, -p.l1g * sp, 0.0,
      1.0, p.l2g * sp, -p.l3g * sr,
      1.0, p.l2g * sp, p.l3g * sr;
  return j;
}

Eigen::Vector3d maglev_output_rate(const MaglevState& x, const MaglevParams& p) {
  return maglev_output_jacobian(x, p) * x.tail<3>();
}

OutputDynamics maglev_output_dynamics(const MaglevState& x, const MaglevParams& p) {
  const Eigen::Matrix3d jac = maglev_output_jacobian(x, p);
  // d/dt tan θ = sec²θ θ̇ ⇒ d²/dt² tan θ = sec²θ θ̈ + 2 sec²θ tanθ θ̇².
  const double pitch_curvature = 2.0 * sec2(x(1)) * std::tan(x(1)) * x(4) * x(4);
  const double roll_curvature = 2.0 * sec2(x(2)) * std::tan(x(2)) * x(5) * x(5);
  const Eigen::Vector3d curvature(-p.l1g * pitch_curvature,
                                  p.l2g * pitch_curvature - p.l3g * roll_curvature,
                                  p.l2g * pitch_curvature + p.l3g * roll_curvature);
  return {jac * maglev_drift_acceleration(x, p) + curvature, jac * maglev_input_acceleration(p)};
}

barrier::BarrierEvaluation maglev_barrier(const MaglevState& x, int j, double r_max,
                                          double r_center, const MaglevParams& p) {
  if (j < 0 || j > 2) throw std::out_of_range("maglev_barrier: constraint index must be 0, 1 or 2");
  const double error = maglev_output(x, p)(j) - r_center;
  const double rate = maglev_output_rate(x, p)(j);
  const OutputDynamics dyn = maglev_output_dynamics(x, p);

  barrier::BarrierEvaluation ev;
  ev.h = r_max * r_max - error * error;
  ev.derivatives.resize(2);
  ev.derivatives << ev.h, -2.0 * error * rate;
  ev.lie_f_r = -2.0 * rate * rate - 2.0 * error * dyn.drift(j);
  ev.lie_g_lie_f = -2.0 * error * dyn.input.row(j);
  return ev;
}

Eigen::Vector3d maglev_force_to_voltage(const Eigen::Vector3d& forces,
                                        const Eigen::Vector3d& gaps, const MaglevParams& p) {
  const Eigen::Vector3d k = p.magnet_constants();
  Eigen::Vector3d v;
  for (int j = 0; j < 3; ++j) {
    if (forces(j) < 0.0) throw std::domain_error("maglev_force_to_voltage: electromagnets only attract");
    if (gaps(j) == 0.0) throw std::domain_error("maglev_force_to_voltage: zero gap");
    v(j) = std::abs(gaps(j)) * std::sqrt(forces(j) / k(j));
  }
  return v;
}

Eigen::Vector3d maglev_voltage_to_force(const Eigen::Vector3d& voltages,
                                        const Eigen::Vector3d& gaps, const MaglevParams& p) {
  const Eigen::Vector3d k = p.magnet_constants();
  Eigen::Vector3d f;
  for (int j = 0; j < 3; ++j) {
    if (gaps(j) == 0.0) throw std::domain_error("maglev_voltage_to_force: zero gap");
    const double ratio = voltages(j) / gaps(j);
    f(j) = k(j) * ratio * ratio;
  }
  return f;
}

}  // namespace smcbf::plants
