#include "smcbf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smcbf::sim {

Metrics compute_metrics(const TrajectoryLog& log) {
  if (log.records.empty()) throw std::invalid_argument("compute_metrics: empty log");
  const std::size_t n = log.records.size();
  const std::size_t first = std::min(log.enable_index, n - 1);
  const std::size_t k_constraints = log.records.front().constraints.size();

  Metrics m;
  m.min_h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k_constraints; ++i) {
    ConstraintMetrics c;
    c.name = i < log.constraint_names.size() ? log.constraint_names[i] : "h_" + std::to_string(i);
    c.min_h = std::numeric_limits<double>::infinity();
    std::optional<ViolationInterval> open;
    std::vector<double> sliding;
    for (std::size_t k = first; k < n; ++k) {
      const StepRecord& r = log.records[k];
      const ConstraintSample& s = r.constraints[i];
      c.min_h = std::min(c.min_h, s.h);
      c.max_excursion = std::max(c.max_excursion, s.excursion);
      if (s.h < 0.0) {
        if (!open) open = ViolationInterval{r.t, r.t, 0, 0.0};
        ++open->steps;
      } else if (open) {
        open->end = r.t;
        open->duration = static_cast<double>(open->steps) * log.dt;
        c.violations.push_back(*open);
        open.reset();
      }
      sliding.push_back(s.sliding);
    }
    if (open) {
      open->end = log.records.back().t + log.dt;
      open->duration = static_cast<double>(open->steps) * log.dt;
      c.violations.push_back(*open);
    }
    if (i < log.sliding_policies.size() && sliding.size() >= 2) {
      const auto& p = log.sliding_policies[i];
      c.sliding = barrier::check_sliding_condition(sliding, log.dt, p.eta, p.boundary_layer);
    }
    m.min_h = std::min(m.min_h, c.min_h);
    m.constraints.push_back(std::move(c));
  }

  const auto channels = static_cast<std::size_t>(log.records.front().output.size());
  m.tracking_rms.assign(channels, 0.0);
  for (const StepRecord& r : log.records) {
    for (std::size_t j = 0; j < channels; ++j) {
      const double e = r.output(static_cast<Eigen::Index>(j)) -
                       r.reference(static_cast<Eigen::Index>(j));
      m.tracking_rms[j] += e * e;
    }
    if (r.qp_fallback) ++m.qp_fallbacks;
    if (r.clamp_hit) ++m.clamp_events;
    if (r.constraint_active) ++m.active_steps;
    m.max_qp_iterations = std::max(m.max_qp_iterations, r.qp_iterations);
  }
  for (double& v : m.tracking_rms) v = std::sqrt(v / static_cast<double>(n));

  m.safety_violated = m.min_h < -kSafetyTolerance;
  return m;
}

}  // namespace smcbf::sim
