#include "smcbf/nominal.hpp"

namespace smcbf::nominal {

LqrDesign design_lqr(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                     const Eigen::MatrixXd& r) {
  LqrDesign design;
  design.q = q;
  design.r = r;
  design.p = solve_care(a, b, q, r);
  design.gain = r.llt().solve(b.transpose() * design.p);
  if (design.gain.rows() != 1 || design.gain.cols() < 2)
    throw std::invalid_argument("design_lqr: reference feedforward needs a single-input, >= 2 state design");
  // Feedforward gains coincide with the θ0 and θ1 entries of K.
  design.reference_gain << design.gain(0, 0), design.gain(0, 1);
  return design;
}

double lqr_control(const LqrDesign& design, const Eigen::Vector4d& x, double arm_reference,
                   double pendulum_reference) {
  return -design.gain.row(0).dot(x) + design.reference_gain(0) * arm_reference +
         design.reference_gain(1) * pendulum_reference;
}

}  // namespace smcbf::nominal
