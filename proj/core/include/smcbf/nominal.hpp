#pragma once

#include "smcbf/maglev.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace smcbf::nominal {

/// Raised when no stabilizing Riccati solution meets the residual bound.
class CareError : public std::runtime_error {
 public:
  CareError(const std::string& what, double residual)
      : std::runtime_error(what + " (relative residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// ‖AᵀP + PA − PBR⁻¹BᵀP + Q‖∞.
double care_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                     const Eigen::MatrixXd& r, const Eigen::MatrixXd& p);

/// Stabilizing solution of AᵀP + PA − PBR⁻¹BᵀP + Q = 0.
///
/// The stable invariant subspace of the Hamiltonian matrix provides the
/// initial guess, which Kleinman–Newton iterations then refine until the
/// residual is at most 1e-8·‖Q‖∞. Throws CareError when that fails or the
/// closed loop is not Hurwitz.
Eigen::MatrixXd solve_care(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           const Eigen::MatrixXd& q, const Eigen::MatrixXd& r);

/// Solves AᵀX + XA + C = 0 for symmetric C by Kronecker vectorization.
Eigen::MatrixXd solve_continuous_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c);

struct LqrDesign {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
  Eigen::MatrixXd p;
  Eigen::MatrixXd gain;       // K = R⁻¹BᵀP
  Eigen::Vector2d reference_gain;  // (k1, k2) = (K[0], K[1])
};

/// Builds and checks an LQR design; throws CareError if the Riccati residual
/// or the Hurwitz check fails.
LqrDesign design_lqr(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                     const Eigen::MatrixXd& r);

/// u = −Kx + k1·θ0_ref + k2·θ1_ref.
double lqr_control(const LqrDesign& design, const Eigen::Vector4d& x, double arm_reference,
                   double pendulum_reference);

/// Multivariable sliding-mode tracking law for the MAGLEV gap outputs.
struct SmcTrackingDesign {
  Eigen::Vector3d lambda;          // diagonal of λ_c, 1/s
  Eigen::Vector3d eta;             // sliding-condition margins
  Eigen::Vector3d boundary_layer;  // Φ_c
  Eigen::Vector3d gain;            // K_c

  void validate() const;
};

struct SmcTrackingOutput {
  Eigen::Vector3d forces;
  Eigen::Vector3d sliding;  // S_c = ẏ̃ + λ_c ỹ
};

/// Condition number of ḡ_y above which the decoupling is rejected.
inline constexpr double kMaxDecouplingCondition = 1e8;

/// u = ḡ⁻¹[−f̄ + ÿ_d − λ_c ẏ̃] − ḡ⁻¹K_c sat(S_c/Φ_c), using the nominal
/// output dynamics of `model`.
SmcTrackingOutput smc_tracking_control(const SmcTrackingDesign& design,
                                       const plants::MaglevState& x,
                                       const Eigen::Vector3d& y_desired,
                                       const Eigen::Vector3d& y_desired_rate,
                                       const Eigen::Vector3d& y_desired_accel,
                                       const plants::MaglevParams& model);

/// Right-hand side of the switching-gain bound
///   K_c ≥ (g⁻¹ḡ)(η + f) − f̄ + (I − g⁻¹ḡ)(ÿ_d − λ_c ẏ̃)
/// with (f, g) the assumed real and (f̄, ḡ) the nominal output dynamics at x.
Eigen::Vector3d smc_gain_bound(const plants::MaglevState& x, const plants::MaglevParams& nominal,
                               const plants::MaglevParams& assumed_real, const Eigen::Vector3d& eta,
                               const Eigen::Vector3d& lambda, const Eigen::Vector3d& y_desired_accel,
                               const Eigen::Vector3d& tracking_error_rate);

/// Design with K_c = componentwise max over the given states of |bound|,
/// never below η. Evaluated with ÿ_d = 0 and ẏ̃ = 0.
SmcTrackingDesign design_smc_tracking(const Eigen::Vector3d& lambda, const Eigen::Vector3d& eta,
                                      const Eigen::Vector3d& boundary_layer,
                                      const plants::MaglevParams& nominal,
                                      const plants::MaglevParams& assumed_real,
                                      const std::vector<plants::MaglevState>& design_states);

}  // namespace smcbf::nominal
