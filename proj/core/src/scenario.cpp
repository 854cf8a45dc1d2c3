#include "smcbf/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace smcbf::sim {

std::string_view to_string(FilterMode mode) {
  switch (mode) {
    case FilterMode::kNone: return "none";
    case FilterMode::kEcbf: return "ecbf";
    case FilterMode::kSmcbf: return "smcbf";
  }
  return "unknown";
}

FilterMode filter_mode_from_string(std::string_view name) {
  if (name == "none") return FilterMode::kNone;
  if (name == "ecbf") return FilterMode::kEcbf;
  if (name == "smcbf") return FilterMode::kSmcbf;
  throw std::invalid_argument("filter.mode must be one of none, ecbf, smcbf (got '" +
                              std::string(name) + "')");
}

barrier::SmcbfPolicy SmcbfConfig::policy() const {
  barrier::SmcbfPolicy p =
      barrier::SmcbfPolicy::with_minimal_gain(lambda, eta, boundary_layer, h_desired, delta_max);
  if (switching_gain) p.switching_gain = *switching_gain;
  return p;
}

std::size_t Scenario::num_steps() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

template <class Setup>
void validate_references(const Setup& setup) {
  for (std::size_t i = 0; i < setup.references.size(); ++i) {
    try {
      setup.references[i].validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("references[" + std::to_string(i) + "]: " + e.what());
    }
  }
}

void validate_plant(const FurutaSetup& s) {
  s.nominal.validate();
  require(s.theta1_max > 0.0, "theta1_max must be > 0");
  require(s.lqr.r > 0.0, "lqr.r must be > 0");
  require((s.lqr.q_diagonal.array() >= 0.0).all(), "lqr.q_diagonal entries must be >= 0");
  validate_references(s);
}

void validate_plant(const MaglevSetup& s) {
  s.nominal.validate();
  require((s.r_max.array() > 0.0).all(), "r_max entries must be > 0");
  require(s.r_center.allFinite(), "r_center must be finite");
  require((s.smc.lambda.array() > 0.0).all(), "smc.lambda entries must be > 0");
  require((s.smc.eta.array() > 0.0).all(), "smc.eta entries must be > 0");
  require((s.smc.boundary_layer.array() > 0.0).all(), "smc.boundary_layer entries must be > 0");
  require(s.smc.design_mass_scale > 0.0, "smc.design_mass_scale must be > 0");
  if (s.smc.gain) require((s.smc.gain->array() > 0.0).all(), "smc.gain entries must be > 0");
  validate_references(s);
}

}  // namespace

void Scenario::validate() const {
  require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
  require(std::isfinite(duration) && duration >= dt, "duration must be >= dt");
  require(std::abs(duration / dt - std::round(duration / dt)) < 1e-6,
          "duration must be an integer multiple of dt");
  require(std::isfinite(barrier_enable_time) && barrier_enable_time >= 0.0 &&
              barrier_enable_time <= duration,
          "barrier_enable_time must lie in [0, duration]");
  require(initial_state.size() == num_states(),
          "initial_state must have " + std::to_string(num_states()) + " entries");
  require(initial_state.allFinite(), "initial_state must be finite");
  require(qp.tolerance > 0.0, "qp.tolerance must be > 0");
  require(qp.max_iterations > 0, "qp.max_iterations must be > 0");

  std::visit([](const auto& s) { validate_plant(s); }, plant);
  try {
    std::visit([&](const auto& s) { (void)plants::perturb(s.nominal, perturbation); }, plant);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("perturbation: ") + e.what());
  }

  const auto k = static_cast<std::size_t>(num_constraints());
  if (filter.mode == FilterMode::kEcbf) {
    require(filter.ecbf_gains.size() == k,
            "filter.ecbf_gains must have " + std::to_string(k) + " entries");
    for (std::size_t i = 0; i < k; ++i) {
      require(filter.ecbf_gains[i].size() == 2,
              "filter.ecbf_gains[" + std::to_string(i) + "] must have 2 entries");
      try {
        barrier::EcbfPolicy policy(filter.ecbf_gains[i]);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("filter.ecbf_gains[" + std::to_string(i) + "]: " + e.what());
      }
    }
  }
  if (filter.mode == FilterMode::kSmcbf) {
    require(filter.smcbf.size() == k, "filter.smcbf must have " + std::to_string(k) + " entries");
    for (std::size_t i = 0; i < k; ++i) {
      try {
        filter.smcbf[i].policy().validate();
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("filter.smcbf[" + std::to_string(i) + "]: " + e.what());
      }
    }
  }
}

plants::MaglevState maglev_state_from_gaps(const Eigen::Vector3d& gaps,
                                           const plants::MaglevParams& p) {
  const double tan_roll = (gaps(2) - gaps(1)) / (2.0 * p.l3g);
  const double tan_pitch = (0.5 * (gaps(1) + gaps(2)) - gaps(0)) / (p.l1g + p.l2g);
  plants::MaglevState x = plants::MaglevState::Zero();
  x(0) = gaps(0) + p.l1g * tan_pitch;
  x(1) = std::atan(tan_pitch);
  x(2) = std::atan(tan_roll);
  return x;
}

}  // namespace smcbf::sim
