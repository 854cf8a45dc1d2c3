#include "smcbf/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace smcbf::barrier {

void BarrierEvaluation::validate() const {
  if (derivatives.size() < 1) throw std::invalid_argument("BarrierEvaluation: empty derivative chain");
  if (derivatives(0) != h) throw std::invalid_argument("BarrierEvaluation: derivatives[0] must equal h");
  if (lie_g_lie_f.size() < 1) throw std::invalid_argument("BarrierEvaluation: empty input row");
}

Eigen::MatrixXd companion_drift(int relative_degree) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(relative_degree, relative_degree);
  for (int i = 0; i + 1 < relative_degree; ++i) f(i, i + 1) = 1.0;
  return f;
}

Eigen::VectorXd companion_input(int relative_degree) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(relative_degree);
  g(relative_degree - 1) = 1.0;
  return g;
}

EcbfPolicy::EcbfPolicy(Eigen::RowVectorXd gain) : gain_(std::move(gain)) {
  if (gain_.size() < 1) throw std::invalid_argument("EcbfPolicy: empty gain");
  if (!gain_.allFinite()) throw std::invalid_argument("EcbfPolicy: non-finite gain");
  const Eigen::VectorXcd eig = closed_loop_matrix().eigenvalues();
  if ((eig.real().array() >= 0.0).any())
    throw std::invalid_argument("EcbfPolicy: F_b - G_b K_b is not Hurwitz");
}

Eigen::MatrixXd EcbfPolicy::closed_loop_matrix() const {
  const int r = relative_degree();
  return companion_drift(r) - companion_input(r) * gain_;
}

EcbfPolicy pole_placement_gain(std::span<const double> pole_magnitudes) {
  const auto r = static_cast<int>(pole_magnitudes.size());
  if (r < 1 || r > 3) throw std::invalid_argument("pole_placement_gain: r must be 1, 2 or 3");
  // Expand ∏(s + pᵢ); coefficients[j] multiplies s^j.
  Eigen::VectorXd coefficients = Eigen::VectorXd::Zero(r + 1);
  coefficients(0) = 1.0;
  int degree = 0;
  for (double p : pole_magnitudes) {
    if (!(p > 0.0) || !std::isfinite(p))
      throw std::invalid_argument("pole_placement_gain: pole magnitudes must be > 0");
    for (int j = degree + 1; j >= 1; --j) coefficients(j) = coefficients(j - 1) + p * coefficients(j);
    coefficients(0) *= p;
    ++degree;
  }
  // Companion characteristic polynomial is s^r + K_{r−1}s^{r−1} + … + K_0.
  return EcbfPolicy(coefficients.head(r).transpose());
}

SmcbfPolicy SmcbfPolicy::with_minimal_gain(double lambda, double eta, double boundary_layer,
                                           double h_desired, double delta_max) {
  SmcbfPolicy p{lambda, eta, delta_max + eta, boundary_layer, h_desired, delta_max};
  p.validate();
  return p;
}

void SmcbfPolicy::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("SmcbfPolicy: " + what); };
  if (!(lambda > 0.0)) fail("lambda must be > 0");
  if (!(eta > 0.0)) fail("eta must be > 0");
  if (!(boundary_layer > 0.0)) fail("boundary layer must be > 0");
  if (!(h_desired > 0.0)) fail("h_desired must be > 0 with a boundary layer");
  if (!(delta_max >= 0.0)) fail("delta_max must be >= 0");
  if (!(switching_gain >= delta_max + eta)) fail("switching gain below delta_max + eta");
}

LinearInputConstraint cbf_constraint_r1(const BarrierEvaluation& ev, double alpha_gain) {
  ev.validate();
  if (ev.relative_degree() != 1) throw std::invalid_argument("cbf_constraint_r1: relative degree must be 1");
  if (!(alpha_gain > 0.0)) throw std::invalid_argument("cbf_constraint_r1: alpha gain must be > 0");
  return {ev.lie_g_lie_f, -ev.lie_f_r - alpha_gain * ev.h};
}

LinearInputConstraint ecbf_constraint(const BarrierEvaluation& ev, const EcbfPolicy& policy) {
  ev.validate();
  if (ev.relative_degree() != policy.relative_degree())
    throw std::invalid_argument("ecbf_constraint: gain length does not match relative degree");
  return {ev.lie_g_lie_f, -ev.lie_f_r - policy.gain().dot(ev.derivatives)};
}

double sat(double z) {
  if (std::abs(z) <= 1.0) return z;
  return z > 0.0 ? 1.0 : -1.0;
}

namespace {

void require_relative_degree_two(const BarrierEvaluation& ev) {
  ev.validate();
  if (ev.relative_degree() != 2) throw std::invalid_argument("SMCBF requires relative degree 2");
}

}  // namespace

double sliding_surface(const BarrierEvaluation& ev, const SmcbfPolicy& policy) {
  require_relative_degree_two(ev);
  return ev.derivatives(1) + policy.lambda * (ev.h - policy.h_desired);
}

double smcbf_virtual_bound(const BarrierEvaluation& ev, const SmcbfPolicy& policy) {
  const double s = sliding_surface(ev, policy);
  const double equivalent = -policy.lambda * ev.derivatives(1);
  return equivalent - policy.switching_gain * sat(s / policy.boundary_layer);
}

LinearInputConstraint smcbf_constraint(const BarrierEvaluation& ev, const SmcbfPolicy& policy) {
  policy.validate();
  return {ev.lie_g_lie_f, smcbf_virtual_bound(ev, policy) - ev.lie_f_r};
}

qp::QpProblem assemble_filter_qp(const Eigen::VectorXd& u_nominal,
                                 std::span<const LinearInputConstraint> constraints) {
  const Eigen::Index m = u_nominal.size();
  const auto k = static_cast<Eigen::Index>(constraints.size());
  Eigen::MatrixXd rows(k, m);
  Eigen::VectorXd bounds(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& c = constraints[static_cast<std::size_t>(i)];
    if (c.row.size() != m) throw std::invalid_argument("assemble_filter_qp: constraint width mismatch");
    rows.row(i) = c.row;
    bounds(i) = c.bound;
  }
  return qp::QpProblem(2.0 * Eigen::MatrixXd::Identity(m, m), -2.0 * u_nominal, std::move(rows),
                       std::move(bounds));
}

FilterResult filter_input(const Eigen::VectorXd& u_nominal,
                          std::span<const LinearInputConstraint> constraints,
                          const qp::HildrethSettings& settings) {
  FilterResult result;
  result.u = u_nominal;
  result.active.assign(constraints.size(), false);

  std::vector<LinearInputConstraint> kept;
  std::vector<std::size_t> kept_index;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    if (c.row.norm() < kDegenerateRowNorm) {
      if (c.bound <= 0.0) {
        ++result.dropped_rows;
        continue;
      }
      result.status = qp::QpStatus::kInfeasibleDetected;
      result.fallback = true;
      return result;
    }
    kept.push_back(c);
    kept_index.push_back(i);
  }
  if (kept.empty()) return result;

  const qp::QpSolution solution = qp::solve_hildreth(assemble_filter_qp(u_nominal, kept), settings);
  result.status = solution.status;
  result.iterations = solution.iterations;
  if (solution.status != qp::QpStatus::kConverged) {
    result.fallback = true;
    return result;
  }
  bool any_active = false;
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const bool active = solution.multipliers(static_cast<Eigen::Index>(j)) > 0.0;
    result.active[kept_index[j]] = active;
    any_active = any_active || active;
  }
  // With no binding row the minimizer is u_no itself; skip the round trip
  // through the Hessian factor so the pass-through is exact.
  if (any_active) result.u = solution.u_star;
  return result;
}

SlidingConditionReport check_sliding_condition(std::span<const double> sliding_trace, double dt,
                                               double eta, double boundary_layer) {
  if (sliding_trace.size() < 2) throw std::invalid_argument("check_sliding_condition: need at least 2 samples");
  if (!(dt > 0.0)) throw std::invalid_argument("check_sliding_condition: dt must be > 0");
  SlidingConditionReport report;
  report.max_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < sliding_trace.size(); ++k) {
    const double s = sliding_trace[k];
    if (!(std::abs(s) > boundary_layer)) continue;  // also skips NaN samples
    const double next = sliding_trace[k + 1];
    const double residual = 0.5 * (next * next - s * s) / dt + eta * std::abs(s);
    ++report.checked_samples;
    report.max_residual = std::max(report.max_residual, residual);
    if (residual > 0.0) ++report.violations;
  }
  return report;
}

}  // namespace smcbf::barrier
