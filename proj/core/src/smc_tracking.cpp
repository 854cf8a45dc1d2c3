#include "smcbf/nominal.hpp"

#include "smcbf/barrier.hpp"

#include <Eigen/SVD>

#include <limits>
#include <stdexcept>

namespace smcbf::nominal {

void SmcTrackingDesign::validate() const {
  if ((lambda.array() <= 0.0).any()) throw std::invalid_argument("SmcTrackingDesign: lambda must be > 0");
  if ((eta.array() <= 0.0).any()) throw std::invalid_argument("SmcTrackingDesign: eta must be > 0");
  if ((boundary_layer.array() <= 0.0).any())
    throw std::invalid_argument("SmcTrackingDesign: boundary layer must be > 0");
  if ((gain.array() < eta.array()).any()) throw std::invalid_argument("SmcTrackingDesign: gain below eta");
}

namespace {

double condition_number(const Eigen::Matrix3d& m) {
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(m).singularValues();
  return sv(2) > 0.0 ? sv(0) / sv(2) : std::numeric_limits<double>::infinity();
}

}  // namespace

SmcTrackingOutput smc_tracking_control(const SmcTrackingDesign& design,
                                       const plants::MaglevState& x,
                                       const Eigen::Vector3d& y_desired,
                                       const Eigen::Vector3d& y_desired_rate,
                                       const Eigen::Vector3d& y_desired_accel,
                                       const plants::MaglevParams& model) {
  const plants::OutputDynamics dyn = plants::maglev_output_dynamics(x, model);
  if (condition_number(dyn.input) > kMaxDecouplingCondition)
    throw std::domain_error("smc_tracking_control: near-singular decoupling matrix");

  const Eigen::Vector3d error = plants::maglev_output(x, model) - y_desired;
  const Eigen::Vector3d error_rate = plants::maglev_output_rate(x, model) - y_desired_rate;

  SmcTrackingOutput out;
  out.sliding = error_rate + design.lambda.cwiseProduct(error);
  Eigen::Vector3d switching;
  for (int i = 0; i < 3; ++i)
    switching(i) = design.gain(i) * barrier::sat(out.sliding(i) / design.boundary_layer(i));
  const Eigen::Vector3d target =
      -dyn.drift + y_desired_accel - design.lambda.cwiseProduct(error_rate) - switching;
  out.forces = dyn.input.partialPivLu().solve(target);
  return out;
}

Eigen::Vector3d smc_gain_bound(const plants::MaglevState& x, const plants::MaglevParams& nominal,
                               const plants::MaglevParams& assumed_real, const Eigen::Vector3d& eta,
                               const Eigen::Vector3d& lambda, const Eigen::Vector3d& y_desired_accel,
                               const Eigen::Vector3d& tracking_error_rate) {
  const plants::OutputDynamics nom = plants::maglev_output_dynamics(x, nominal);
  const plants::OutputDynamics real = plants::maglev_output_dynamics(x, assumed_real);
  const Eigen::Matrix3d ratio = real.input.partialPivLu().solve(nom.input);  // g⁻¹ḡ
  const Eigen::Vector3d reference_term = y_desired_accel - lambda.cwiseProduct(tracking_error_rate);
  return ratio * (eta + real.drift) - nom.drift +
         (Eigen::Matrix3d::Identity() - ratio) * reference_term;
}

SmcTrackingDesign design_smc_tracking(const Eigen::Vector3d& lambda, const Eigen::Vector3d& eta,
                                      const Eigen::Vector3d& boundary_layer,
                                      const plants::MaglevParams& nominal,
                                      const plants::MaglevParams& assumed_real,
                                      const std::vector<plants::MaglevState>& design_states) {
  SmcTrackingDesign design{lambda, eta, boundary_layer, eta};
  for (const auto& x : design_states) {
    const Eigen::Vector3d bound = smc_gain_bound(x, nominal, assumed_real, eta, lambda,
                                                 Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero());
    design.gain = design.gain.cwiseMax(bound.cwiseAbs());
  }
  design.validate();
  return design;
}

}  // namespace smcbf::nominal
