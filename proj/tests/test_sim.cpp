#include "smcbf/experiments.hpp"
#include "smcbf/reference.hpp"
#include "smcbf/rk4.hpp"
#include "smcbf/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

namespace {

using namespace smcbf::sim;

TEST(Reference, SquareWave) {
  const SquareWave sq{0.5, 10.0};
  EXPECT_EQ(generate_reference(sq, 0.0), 0.5);
  EXPECT_EQ(generate_reference(sq, 2.0), 0.5);
  EXPECT_EQ(generate_reference(sq, 7.0), -0.5);
  EXPECT_EQ(generate_reference(sq, 12.0), 0.5);
}

TEST(Reference, PulseTrainIsHalfOpen) {
  const PulseTrain p{0.12, 0.5, {15.0, 25.0}};
  EXPECT_EQ(generate_reference(p, 14.999), 0.0);
  EXPECT_EQ(generate_reference(p, 15.0), 0.12);
  EXPECT_EQ(generate_reference(p, 15.4), 0.12);
  EXPECT_EQ(generate_reference(p, 15.5), 0.0);
  EXPECT_EQ(generate_reference(p, 25.2), 0.12);
}

TEST(Reference, StepScheduleAndSum) {
  const StepSchedule s{{0.0, 2.0}, {-0.05, -0.06}};
  EXPECT_EQ(generate_reference(s, -1.0), 0.0);
  EXPECT_EQ(generate_reference(s, 1.0), -0.05);
  EXPECT_EQ(generate_reference(s, 2.0), -0.06);

  const ReferenceSignal sum{{s, PulseTrain{0.02, 0.5, {5.5}}}};
  EXPECT_DOUBLE_EQ(sum(5.6), -0.04);
  EXPECT_EQ(ReferenceSignal{}(3.0), 0.0);
}

TEST(Reference, ValidateRejectsMalformedComponents) {
  EXPECT_THROW((ReferenceSignal{{SquareWave{1.0, 0.0}}}.validate()), std::invalid_argument);
  EXPECT_THROW((ReferenceSignal{{PulseTrain{1.0, -1.0, {0.0}}}}.validate()), std::invalid_argument);
  EXPECT_THROW((ReferenceSignal{{StepSchedule{{1.0, 0.0}, {1.0, 2.0}}}}.validate()),
               std::invalid_argument);
  EXPECT_THROW((ReferenceSignal{{StepSchedule{{0.0}, {1.0, 2.0}}}}.validate()), std::invalid_argument);
}

using Scalar = Eigen::Matrix<double, 1, 1>;

TEST(Rk4, ZeroDerivativeKeepsState) {
  const Scalar x = Scalar::Constant(3.25);
  const auto zero = [](const Scalar&, double) { return Scalar::Zero().eval(); };
  EXPECT_EQ(rk4_step(zero, x, 0.0, 0.1)(0), 3.25);
}

TEST(Rk4, MatchesExponentialTaylorPolynomial) {
  // One step on ẋ = ax reproduces the degree-4 Taylor polynomial of e^{aΔt}.
  const double a = -1.7, dt = 0.1;
  const auto f = [a](const Scalar& x, double) { return (a * x).eval(); };
  const double z = a * dt;
  const double taylor = 1 + z + z * z / 2 + z * z * z / 6 + z * z * z * z / 24;
  const Scalar one = Scalar::Constant(1.0);
  EXPECT_NEAR(rk4_step(f, one, 0.0, dt)(0), taylor, 1e-15);
}

TEST(Rk4, NonFiniteDerivativeThrows) {
  const auto f = [](const Scalar& x, double) { return (x / 0.0).eval(); };
  const Scalar one = Scalar::Constant(1.0);
  EXPECT_THROW(rk4_step(f, one, 0.0, 0.1), IntegrationError);
  EXPECT_THROW(rk4_step(f, one, 0.0, 0.0), std::invalid_argument);
}

// Observed order from three step sizes without an exact solution.
double self_convergence_order(double dt) {
  using State = Eigen::Vector2d;
  // Nonlinear pendulum.
  const auto f = [](const State& x, double) { return State(x(1), -std::sin(x(0))); };
  auto integrate = [&](double h) {
    State x(1.0, 0.0);
    const int steps = static_cast<int>(std::llround(2.0 / h));
    for (int k = 0; k < steps; ++k) x = rk4_step(f, x, 0.0, h);
    return x;
  };
  const State coarse = integrate(dt), mid = integrate(dt / 2), fine = integrate(dt / 4);
  return std::log2((coarse - mid).norm() / (mid - fine).norm());
}

TEST(Rk4, SelfConvergenceOrder) {
  const double order = self_convergence_order(0.05);
  EXPECT_GE(order, 3.0);
  EXPECT_NEAR(order, 4.0, 0.3);
}

Scenario quiet_furuta(FilterMode mode) {
  Scenario s = make_experiment(mode == FilterMode::kNone ? "furuta-lqr" : "furuta-ecbf-nominal");
  auto& setup = std::get<FurutaSetup>(s.plant);
  setup.references = {};
  s.initial_state = Eigen::Vector4d(0.0, 0.02, 0.0, 0.0);
  s.duration = 10.0;
  return s;
}

TEST(ClosedLoop, LqrRegulatesToOrigin) {
  const TrajectoryLog log = run_closed_loop(quiet_furuta(FilterMode::kNone));
  ASSERT_EQ(log.records.size(), 10001u);
  EXPECT_LT(log.records.back().state.norm(), 1e-3);
  EXPECT_DOUBLE_EQ(log.records.back().t, 10.0);
}

TEST(ClosedLoop, InactiveFilterDoesNotAlterInput) {
  const TrajectoryLog plain = run_closed_loop(quiet_furuta(FilterMode::kNone));
  const TrajectoryLog filtered = run_closed_loop(quiet_furuta(FilterMode::kEcbf));
  ASSERT_EQ(plain.records.size(), filtered.records.size());
  EXPECT_EQ(compute_metrics(filtered).active_steps, 0u);
  for (std::size_t k = 0; k < plain.records.size(); ++k) {
    ASSERT_TRUE(filtered.records[k].filter_engaged);
    ASSERT_EQ(plain.records[k].u_applied, filtered.records[k].u_applied) << k;
    ASSERT_EQ(plain.records[k].state, filtered.records[k].state) << k;
  }
}

TEST(ClosedLoop, RecordsAreDeterministic) {
  Scenario s = make_experiment("maglev-smcbf-real");
  s.duration = 1.5;
  const TrajectoryLog a = run_closed_loop(s);
  const TrajectoryLog b = run_closed_loop(s);
  ASSERT_EQ(a.records.size(), s.num_steps() + 1);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    ASSERT_EQ(a.records[k].state, b.records[k].state);
    ASSERT_EQ(a.records[k].u_applied, b.records[k].u_applied);
  }
}

TEST(ClosedLoop, FilterEngagesAtEnableTime) {
  Scenario s = make_experiment("maglev-ecbf-nominal");
  s.duration = 1.2;
  const TrajectoryLog log = run_closed_loop(s);
  EXPECT_EQ(log.enable_index, 10000u);
  EXPECT_FALSE(log.records[9999].filter_engaged);
  EXPECT_TRUE(std::isnan(log.records[9999].constraints[0].virtual_bound));
  EXPECT_TRUE(log.records[10000].filter_engaged);
  EXPECT_EQ(log.records[9999].u_filtered, log.records[9999].u_nominal);
}

TEST(ClosedLoop, ControllerUsesNominalModel) {
  // Perturbing the plant must change the trajectory but not the step-0 input.
  Scenario nominal = make_experiment("furuta-lqr");
  nominal.duration = 0.5;
  Scenario heavy = nominal;
  heavy.perturbation = {{"arm_mass", 1.6}, {"pendulum_mass", 1.6}};
  const auto a = run_closed_loop(nominal), b = run_closed_loop(heavy);
  EXPECT_EQ(a.records[0].u_nominal, b.records[0].u_nominal);
  EXPECT_NE(a.records.back().state, b.records.back().state);
}

TEST(ClosedLoop, ExperimentsAreWellFormed) {
  const auto list = list_experiments();
  ASSERT_EQ(list.size(), 8u);
  std::set<std::string_view> ids;
  for (const auto& info : list) {
    ids.insert(info.id);
    const Scenario s = make_experiment(info.id);
    EXPECT_NO_THROW(s.validate()) << info.id;
    EXPECT_EQ(s.name, info.id);
  }
  EXPECT_EQ(ids.size(), 8u);
  EXPECT_THROW(make_experiment("nope"), std::invalid_argument);
}

TEST(ScenarioValidate, NamesTheOffendingField) {
  auto message = [](const Scenario& s) {
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  Scenario s = make_experiment("furuta-lqr");
  s.dt = 0.0;
  EXPECT_NE(message(s).find("dt"), std::string::npos);
  s = make_experiment("furuta-lqr");
  s.duration = 1.0005;
  EXPECT_NE(message(s).find("integer multiple"), std::string::npos);
  s = make_experiment("furuta-lqr");
  s.initial_state = Eigen::VectorXd::Zero(6);
  EXPECT_NE(message(s).find("initial_state"), std::string::npos);
  s = make_experiment("furuta-lqr");
  s.perturbation = {{"wingspan", 2.0}};
  EXPECT_NE(message(s).find("wingspan"), std::string::npos);
  s = make_experiment("furuta-ecbf-real");
  s.filter.ecbf_gains = {Eigen::RowVector2d(-1.0, 1.0)};
  EXPECT_FALSE(message(s).empty());
  s = make_experiment("maglev-smcbf-real");
  s.filter.smcbf.pop_back();
  EXPECT_FALSE(message(s).empty());
  EXPECT_THROW(run_closed_loop(s), std::invalid_argument);
}

TrajectoryLog synthetic_log(const std::vector<double>& h) {
  TrajectoryLog log;
  log.dt = 0.1;
  log.constraint_names = {"h_F"};
  for (std::size_t k = 0; k < h.size(); ++k) {
    StepRecord r;
    r.t = 0.1 * static_cast<double>(k);
    r.output = Eigen::Vector2d(1.0, 0.0);
    r.reference = Eigen::Vector2d::Zero();
    ConstraintSample c;
    c.h = h[k];
    c.excursion = std::abs(h[k]);
    c.sliding = std::numeric_limits<double>::quiet_NaN();
    r.constraints = {c};
    log.records.push_back(r);
  }
  return log;
}

TEST(Metrics, ViolationIntervals) {
  const Metrics m = compute_metrics(synthetic_log({1, 1, -0.1, -0.2, -0.1, 0.5, 1}));
  ASSERT_EQ(m.constraints.size(), 1u);
  const auto& v = m.constraints[0].violations;
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].steps, 3u);
  EXPECT_NEAR(v[0].start, 0.2, 1e-15);
  EXPECT_NEAR(v[0].end, 0.5, 1e-15);
  EXPECT_NEAR(v[0].duration, 0.3, 1e-15);
  EXPECT_EQ(m.min_h, -0.2);
  EXPECT_TRUE(m.safety_violated);
  EXPECT_DOUBLE_EQ(m.tracking_rms[0], 1.0);
  EXPECT_EQ(m.tracking_rms[1], 0.0);
  EXPECT_FALSE(m.constraints[0].sliding.has_value());
}

TEST(Metrics, OpenIntervalAtEndAndTolerance) {
  const Metrics m = compute_metrics(synthetic_log({1, -1e-7, 1, -0.5}));
  ASSERT_EQ(m.constraints[0].violations.size(), 2u);
  EXPECT_NEAR(m.constraints[0].violations[1].end, 0.4, 1e-15);

  const Metrics tiny = compute_metrics(synthetic_log({1, -1e-7, 1}));
  EXPECT_FALSE(tiny.safety_violated);
  EXPECT_EQ(tiny.constraints[0].violations.size(), 1u);
}

TEST(Metrics, IgnoresRecordsBeforeEnable) {
  TrajectoryLog log = synthetic_log({-1, -1, 0.5, 0.25});
  log.enable_index = 2;
  const Metrics m = compute_metrics(log);
  EXPECT_EQ(m.min_h, 0.25);
  EXPECT_TRUE(m.constraints[0].violations.empty());
}

// The SMCBF run is safe where the ECBF run on the same plant is not.
TEST(Metrics, SmcbfDominatesEcbfUnderMassUncertainty) {
  const Metrics ecbf = compute_metrics(run_closed_loop(make_experiment("furuta-ecbf-real")));
  const Metrics smcbf = compute_metrics(run_closed_loop(make_experiment("furuta-smcbf-real")));
  EXPECT_TRUE(ecbf.safety_violated);
  EXPECT_FALSE(smcbf.safety_violated);
  EXPECT_GT(smcbf.min_h, ecbf.min_h);
  EXPECT_EQ(smcbf.qp_fallbacks, 0u);
}

}  // namespace
