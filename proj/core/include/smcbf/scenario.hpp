#pragma once

#include "smcbf/barrier.hpp"
#include "smcbf/furuta.hpp"
#include "smcbf/maglev.hpp"
#include "smcbf/perturb.hpp"
#include "smcbf/qp.hpp"
#include "smcbf/reference.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace smcbf::sim {

enum class FilterMode { kNone, kEcbf, kSmcbf };

std::string_view to_string(FilterMode mode);
FilterMode filter_mode_from_string(std::string_view name);

struct LqrConfig {
  Eigen::Vector4d q_diagonal = Eigen::Vector4d::Constant(500.0);
  double r = 1.0;
};

/// Furuta pendulum under LQR, safety constraint |θ1| ≤ theta1_max.
struct FurutaSetup {
  plants::FurutaParams nominal;
  LqrConfig lqr;
  double theta1_max = 0.087;
  std::array<ReferenceSignal, 2> references;  // θ0_ref, θ1_ref
};

struct SmcConfig {
  Eigen::Vector3d lambda = Eigen::Vector3d::Constant(50.0);
  Eigen::Vector3d eta = Eigen::Vector3d::Constant(30.0);
  Eigen::Vector3d boundary_layer = Eigen::Vector3d::Constant(0.05);
  // Mass scale the switching-gain bound must cover.
  double design_mass_scale = 1.3;
  // Overrides the designed K_c when set.
  std::optional<Eigen::Vector3d> gain;
};

/// MAGLEV plate under SMC tracking, constraints |r_j − r_center_j| ≤ r_max_j.
struct MaglevSetup {
  plants::MaglevParams nominal;
  SmcConfig smc;
  Eigen::Vector3d r_max = Eigen::Vector3d::Constant(0.01);
  Eigen::Vector3d r_center{-0.05, -0.07, -0.09};
  std::array<ReferenceSignal, 3> references;
  // Electromagnets only attract: clamp F_j ≥ 0 at the plant input.
  bool clamp_nonnegative_forces = true;
};

/// Per-constraint SMCBF configuration. switching_gain defaults to
/// delta_max + eta.
struct SmcbfConfig {
  double lambda = 0.0;
  double eta = 0.0;
  double boundary_layer = 0.0;
  double h_desired = 0.0;
  double delta_max = 0.0;
  std::optional<double> switching_gain;

  barrier::SmcbfPolicy policy() const;
};

struct FilterConfig {
  FilterMode mode = FilterMode::kNone;
  std::vector<Eigen::RowVectorXd> ecbf_gains;  // one per constraint
  std::vector<SmcbfConfig> smcbf;              // one per constraint
};

struct Scenario {
  std::string name;
  std::variant<FurutaSetup, MaglevSetup> plant;
  // Applied to the simulated plant only; the controller keeps the nominal model.
  plants::ScaleMap perturbation;
  FilterConfig filter;
  Eigen::VectorXd initial_state;
  double dt = 1e-3;
  double duration = 1.0;
  double barrier_enable_time = 0.0;
  qp::HildrethSettings qp;
  // A violation in such a scenario is an error (CLI exit code 2).
  bool promises_safety = false;

  bool is_furuta() const { return std::holds_alternative<FurutaSetup>(plant); }
  int num_constraints() const { return is_furuta() ? 1 : 3; }
  int num_states() const { return is_furuta() ? 4 : 6; }
  int num_inputs() const { return is_furuta() ? 1 : 3; }
  int num_outputs() const { return is_furuta() ? 2 : 3; }
  std::size_t num_steps() const;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Plate state with the given gap positions, zero angles' rates and velocities.
plants::MaglevState maglev_state_from_gaps(const Eigen::Vector3d& gaps,
                                           const plants::MaglevParams& p);

}  // namespace smcbf::sim
