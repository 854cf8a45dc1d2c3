#pragma once

#include "smcbf/barrier.hpp"
#include "smcbf/qp.hpp"
#include "smcbf/scenario.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace smcbf::sim {

/// Per-step view of one safety constraint. `sliding` is NaN unless the SMCBF
/// filter evaluated it; `virtual_bound` (μ_lo) is NaN while no filter runs.
struct ConstraintSample {
  double h = 0.0;
  double h_rate = 0.0;
  double sliding = 0.0;
  double virtual_bound = 0.0;
  double excursion = 0.0;  // |θ1| or |r_j − r_center_j|
  bool active = false;
};

struct StepRecord {
  double t = 0.0;
  Eigen::VectorXd state;
  Eigen::VectorXd output;
  Eigen::VectorXd reference;
  Eigen::VectorXd u_nominal;
  Eigen::VectorXd u_filtered;
  Eigen::VectorXd u_applied;
  std::vector<ConstraintSample> constraints;
  qp::QpStatus qp_status = qp::QpStatus::kConverged;
  int qp_iterations = 0;
  bool filter_engaged = false;  // filter evaluated at this step
  bool constraint_active = false;
  bool qp_fallback = false;
  bool clamp_hit = false;
};

struct TrajectoryLog {
  double dt = 0.0;
  double barrier_enable_time = 0.0;
  std::size_t enable_index = 0;  // first record with t ≥ enable time
  bool furuta = true;
  FilterMode mode = FilterMode::kNone;
  std::vector<std::string> state_names;
  std::vector<std::string> output_names;
  std::vector<std::string> input_names;
  std::vector<std::string> constraint_names;
  // Margins and layers of the SMCBF policies, used by the sliding check.
  std::vector<barrier::SmcbfPolicy> sliding_policies;
  std::vector<StepRecord> records;
};

/// Integrates the perturbed plant while the controller and filter use the
/// nominal model. Record k holds t = k·dt, the state at that time and the
/// input held over [t, t + dt). Bitwise deterministic.
TrajectoryLog run_closed_loop(const Scenario& scenario);

struct ViolationInterval {
  double start = 0.0;
  double end = 0.0;  // time of the first record back in the safe set
  std::size_t steps = 0;
  double duration = 0.0;  // steps·dt
};

struct ConstraintMetrics {
  std::string name;
  double min_h = 0.0;
  double max_excursion = 0.0;
  std::vector<ViolationInterval> violations;
  std::optional<barrier::SlidingConditionReport> sliding;
};

/// Tolerance below zero that still counts as safe.
inline constexpr double kSafetyTolerance = 1e-6;

struct Metrics {
  std::vector<ConstraintMetrics> constraints;
  std::vector<double> tracking_rms;  // per output channel, whole run
  std::size_t qp_fallbacks = 0;
  std::size_t clamp_events = 0;
  std::size_t active_steps = 0;
  int max_qp_iterations = 0;
  double min_h = 0.0;  // over all constraints
  bool safety_violated = false;  // min_h < −kSafetyTolerance
};

/// Summaries over records with t ≥ the barrier enable time; tracking RMS and
/// counters cover the whole run.
Metrics compute_metrics(const TrajectoryLog& log);

}  // namespace smcbf::sim
