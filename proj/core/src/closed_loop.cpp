#include "smcbf/nominal.hpp"
#include "smcbf/perturb.hpp"
#include "smcbf/rk4.hpp"
#include "smcbf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smcbf::sim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class FurutaLoop {
 public:
  explicit FurutaLoop(const Scenario& s)
      : setup_(std::get<FurutaSetup>(s.plant)),
        real_(plants::perturb(setup_.nominal, s.perturbation)),
        model_(plants::furuta_linearize(setup_.nominal)) {
    const Eigen::MatrixXd q = setup_.lqr.q_diagonal.asDiagonal();
    const Eigen::MatrixXd r = Eigen::MatrixXd::Constant(1, 1, setup_.lqr.r);
    lqr_ = nominal::design_lqr(model_.a, model_.b, q, r);
  }

  static std::vector<std::string> state_names() {
    return {"theta0", "theta1", "theta0_rate", "theta1_rate"};
  }
  static std::vector<std::string> output_names() { return {"theta0", "theta1"}; }
  static std::vector<std::string> input_names() { return {"duty"}; }
  static std::vector<std::string> constraint_names() { return {"h_F"}; }

  Eigen::VectorXd output(const Eigen::VectorXd& x) const { return x.head<2>(); }

  Eigen::VectorXd reference(double t) const {
    return Eigen::Vector2d(setup_.references[0](t), setup_.references[1](t));
  }

  Eigen::VectorXd nominal(const Eigen::VectorXd& x, const Eigen::VectorXd& ref) const {
    return Eigen::VectorXd::Constant(1, nominal::lqr_control(lqr_, x, ref(0), ref(1)));
  }

  std::vector<barrier::BarrierEvaluation> barriers(const Eigen::VectorXd& x) const {
    return {plants::furuta_barrier(x, setup_.theta1_max, model_)};
  }

  std::vector<double> excursions(const Eigen::VectorXd& x) const {
    return {std::abs(x(plants::furuta_index::kPendulumAngle))};
  }

  bool clamp(Eigen::VectorXd& u) const {
    const double clamped = std::clamp(u(0), -plants::kFurutaDutyLimit, plants::kFurutaDutyLimit);
    const bool hit = clamped != u(0);
    u(0) = clamped;
    return hit;
  }

  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double dt) const {
    const plants::FurutaState x4 = x;
    auto deriv = [this](const plants::FurutaState& s, double duty) {
      return plants::furuta_dynamics(s, duty, real_);
    };
    return rk4_step(deriv, x4, u(0), dt);
  }

 private:
  const FurutaSetup& setup_;
  plants::FurutaParams real_;
  plants::LinearModel model_;
  nominal::LqrDesign lqr_;
};

class MaglevLoop {
 public:
  explicit MaglevLoop(const Scenario& s)
      : setup_(std::get<MaglevSetup>(s.plant)),
        real_(plants::perturb(setup_.nominal, s.perturbation)) {
    const SmcConfig& c = setup_.smc;
    if (c.gain) {
      smc_ = {c.lambda, c.eta, c.boundary_layer, *c.gain};
      smc_.validate();
    } else {
      const plants::MaglevParams assumed =
          plants::perturb(setup_.nominal, {{"M", c.design_mass_scale}});
      smc_ = nominal::design_smc_tracking(c.lambda, c.eta, c.boundary_layer, setup_.nominal,
                                          assumed, {plants::MaglevState::Zero()});
    }
  }

  const nominal::SmcTrackingDesign& design() const { return smc_; }

  static std::vector<std::string> state_names() {
    return {"x_v", "theta_p", "theta_r", "x_v_rate", "theta_p_rate", "theta_r_rate"};
  }
  static std::vector<std::string> output_names() { return {"r1", "r2", "r3"}; }
  static std::vector<std::string> input_names() { return {"F1", "F2", "F3"}; }
  static std::vector<std::string> constraint_names() { return {"h_1", "h_2", "h_3"}; }

  Eigen::VectorXd output(const Eigen::VectorXd& x) const {
    return plants::maglev_output(x, setup_.nominal);
  }

  Eigen::VectorXd reference(double t) const {
    return Eigen::Vector3d(setup_.references[0](t), setup_.references[1](t),
                           setup_.references[2](t));
  }

  // References are piecewise constant, so their derivatives vanish between jumps.
  Eigen::VectorXd nominal(const Eigen::VectorXd& x, const Eigen::VectorXd& ref) const {
    const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
    return nominal::smc_tracking_control(smc_, x, ref, zero, zero, setup_.nominal).forces;
  }

  std::vector<barrier::BarrierEvaluation> barriers(const Eigen::VectorXd& x) const {
    std::vector<barrier::BarrierEvaluation> out;
    for (int j = 0; j < 3; ++j)
      out.push_back(plants::maglev_barrier(x, j, setup_.r_max(j), setup_.r_center(j),
                                           setup_.nominal));
    return out;
  }

  std::vector<double> excursions(const Eigen::VectorXd& x) const {
    const Eigen::Vector3d e = (output(x) - setup_.r_center).cwiseAbs();
    return {e(0), e(1), e(2)};
  }

  bool clamp(Eigen::VectorXd& u) const {
    if (!setup_.clamp_nonnegative_forces || (u.array() >= 0.0).all()) return false;
    u = u.cwiseMax(0.0);
    return true;
  }

  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double dt) const {
    const plants::MaglevState x6 = x;
    const Eigen::Vector3d f = u;
    auto deriv = [this](const plants::MaglevState& s, const Eigen::Vector3d& forces) {
      return plants::maglev_dynamics(s, forces, real_);
    };
    return rk4_step(deriv, x6, f, dt);
  }

 private:
  const MaglevSetup& setup_;
  plants::MaglevParams real_;
  nominal::SmcTrackingDesign smc_;
};

template <class Loop>
TrajectoryLog simulate(const Scenario& s, const Loop& loop) {
  TrajectoryLog log;
  log.dt = s.dt;
  log.barrier_enable_time = s.barrier_enable_time;
  log.furuta = s.is_furuta();
  log.mode = s.filter.mode;
  log.state_names = Loop::state_names();
  log.output_names = Loop::output_names();
  log.input_names = Loop::input_names();
  log.constraint_names = Loop::constraint_names();

  const auto k_constraints = static_cast<std::size_t>(s.num_constraints());
  std::vector<barrier::EcbfPolicy> ecbf;
  std::vector<barrier::SmcbfPolicy> smcbf;
  if (s.filter.mode == FilterMode::kEcbf)
    for (const auto& g : s.filter.ecbf_gains) ecbf.emplace_back(g);
  if (s.filter.mode == FilterMode::kSmcbf)
    for (const auto& c : s.filter.smcbf) smcbf.push_back(c.policy());
  log.sliding_policies = smcbf;

  const std::size_t n = s.num_steps();
  log.enable_index = static_cast<std::size_t>(
      std::max(0.0, std::ceil(s.barrier_enable_time / s.dt - 1e-9)));
  log.records.reserve(n + 1);

  Eigen::VectorXd x = s.initial_state;
  std::vector<barrier::LinearInputConstraint> rows(k_constraints);

  for (std::size_t k = 0; k <= n; ++k) {
    StepRecord rec;
    rec.t = static_cast<double>(k) * s.dt;
    rec.state = x;
    rec.output = loop.output(x);
    rec.reference = loop.reference(rec.t);
    rec.u_nominal = loop.nominal(x, rec.reference);

    const auto evals = loop.barriers(x);
    const auto exc = loop.excursions(x);
    rec.constraints.resize(k_constraints);
    for (std::size_t i = 0; i < k_constraints; ++i) {
      ConstraintSample& c = rec.constraints[i];
      c.h = evals[i].h;
      c.h_rate = evals[i].derivatives(1);
      c.sliding = kNaN;
      c.virtual_bound = kNaN;
      c.excursion = exc[i];
    }

    rec.filter_engaged = s.filter.mode != FilterMode::kNone && k >= log.enable_index;
    rec.u_filtered = rec.u_nominal;
    if (rec.filter_engaged) {
      for (std::size_t i = 0; i < k_constraints; ++i) {
        ConstraintSample& c = rec.constraints[i];
        if (s.filter.mode == FilterMode::kEcbf) {
          rows[i] = barrier::ecbf_constraint(evals[i], ecbf[i]);
          c.virtual_bound = -ecbf[i].gain().dot(evals[i].derivatives);
        } else {
          rows[i] = barrier::smcbf_constraint(evals[i], smcbf[i]);
          c.sliding = barrier::sliding_surface(evals[i], smcbf[i]);
          c.virtual_bound = barrier::smcbf_virtual_bound(evals[i], smcbf[i]);
        }
      }
      const barrier::FilterResult fr = barrier::filter_input(rec.u_nominal, rows, s.qp);
      rec.u_filtered = fr.u;
      rec.qp_status = fr.status;
      rec.qp_iterations = fr.iterations;
      rec.qp_fallback = fr.fallback;
      for (std::size_t i = 0; i < k_constraints; ++i) {
        rec.constraints[i].active = fr.active[i];
        rec.constraint_active = rec.constraint_active || fr.active[i];
      }
    }

    rec.u_applied = rec.u_filtered;
    rec.clamp_hit = loop.clamp(rec.u_applied);

    if (k < n) x = loop.step(x, rec.u_applied, s.dt);
    log.records.push_back(std::move(rec));
  }
  return log;
}

}  // namespace

TrajectoryLog run_closed_loop(const Scenario& scenario) {
  scenario.validate();
  if (scenario.is_furuta()) return simulate(scenario, FurutaLoop(scenario));
  return simulate(scenario, MaglevLoop(scenario));
}

}  // namespace smcbf::sim
