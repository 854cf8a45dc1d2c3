#include "smcbf/experiments.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace smcbf::sim {

namespace {

constexpr std::array<ExperimentInfo, 8> kExperiments{{
    {"furuta-lqr", "Furuta pendulum, LQR only, nominal plant", 2},
    {"furuta-ecbf-nominal", "Furuta pendulum, LQR + ECBF filter, nominal plant", 3},
    {"furuta-ecbf-real", "Furuta pendulum, LQR + ECBF filter, masses x1.6", 4},
    {"furuta-smcbf-real", "Furuta pendulum, LQR + SMCBF filter, masses x1.6", 5},
    {"maglev-smc", "MAGLEV plate, SMC tracking only, plate mass x1.3", 7},
    {"maglev-ecbf-nominal", "MAGLEV plate, SMC + ECBF filter, nominal plant", 8},
    {"maglev-ecbf-real", "MAGLEV plate, SMC + ECBF filter, plate mass x1.3", 9},
    {"maglev-smcbf-real", "MAGLEV plate, SMC + SMCBF filter, plate mass x1.3", 10},
}};

Scenario furuta_base(std::string_view id) {
  FurutaSetup setup;
  setup.references[0].components.push_back(SquareWave{0.5, 10.0});
  setup.references[1].components.push_back(PulseTrain{0.12, 0.5, {15.0, 25.0}});

  Scenario s;
  s.name = std::string(id);
  s.plant = setup;
  s.initial_state = Eigen::Vector4d(0.0, 0.069, 0.0, 0.0);
  s.dt = 1e-3;
  s.duration = 40.0;
  s.barrier_enable_time = 0.0;
  return s;
}

Scenario maglev_base(std::string_view id) {
  MaglevSetup setup;
  for (int j = 0; j < 3; ++j) {
    ReferenceSignal& ref = setup.references[static_cast<std::size_t>(j)];
    ref.components.push_back(StepSchedule{{0.0}, {setup.r_center(j)}});
    // Short excursions toward the boundary after the tracking transient.
    ref.components.push_back(PulseTrain{0.02, 0.5, {5.5, 7.5}});
  }

  Scenario s;
  s.name = std::string(id);
  s.initial_state = maglev_state_from_gaps(Eigen::Vector3d::Constant(0.05), setup.nominal);
  s.plant = setup;
  s.dt = 1e-4;
  s.duration = 10.0;
  s.barrier_enable_time = 1.0;
  return s;
}

void use_ecbf_furuta(Scenario& s) {
  s.filter.mode = FilterMode::kEcbf;
  s.filter.ecbf_gains = {Eigen::RowVector2d(3000.0, 180.0)};
}

void use_smcbf_furuta(Scenario& s) {
  s.filter.mode = FilterMode::kSmcbf;
  SmcbfConfig c;
  c.lambda = 10.0;
  c.eta = 5.0;
  c.boundary_layer = 0.1;
  c.h_desired = 1e-4;
  c.delta_max = 1.0;
  s.filter.smcbf = {c};
}

void use_ecbf_maglev(Scenario& s) {
  s.filter.mode = FilterMode::kEcbf;
  s.filter.ecbf_gains = {Eigen::RowVector2d(2000.0, 200.0), Eigen::RowVector2d(2000.0, 200.0),
                         Eigen::RowVector2d(2000.0, 500.0)};
}

void use_smcbf_maglev(Scenario& s) {
  s.filter.mode = FilterMode::kSmcbf;
  const std::array<double, 3> layers{0.8, 0.3, 0.3};
  s.filter.smcbf.clear();
  for (double phi : layers) {
    SmcbfConfig c;
    c.lambda = 500.0;
    c.eta = 500.0;
    c.boundary_layer = phi;
    c.h_desired = 1e-5;
    c.delta_max = 10.0;
    s.filter.smcbf.push_back(c);
  }
}

const plants::ScaleMap kFurutaReal{{"arm_mass", 1.6}, {"pendulum_mass", 1.6}};
const plants::ScaleMap kMaglevReal{{"mass", 1.3}};

}  // namespace

std::span<const ExperimentInfo> list_experiments() { return kExperiments; }

Scenario make_experiment(std::string_view id) {
  if (id == "furuta-lqr") return furuta_base(id);
  if (id == "furuta-ecbf-nominal") {
    Scenario s = furuta_base(id);
    use_ecbf_furuta(s);
    return s;
  }
  if (id == "furuta-ecbf-real") {
    Scenario s = furuta_base(id);
    use_ecbf_furuta(s);
    s.perturbation = kFurutaReal;
    return s;
  }
  if (id == "furuta-smcbf-real") {
    Scenario s = furuta_base(id);
    use_smcbf_furuta(s);
    s.perturbation = kFurutaReal;
    s.promises_safety = true;
    return s;
  }
  if (id == "maglev-smc") {
    Scenario s = maglev_base(id);
    s.perturbation = kMaglevReal;
    return s;
  }
  if (id == "maglev-ecbf-nominal") {
    Scenario s = maglev_base(id);
    use_ecbf_maglev(s);
    return s;
  }
  if (id == "maglev-ecbf-real") {
    Scenario s = maglev_base(id);
    use_ecbf_maglev(s);
    s.perturbation = kMaglevReal;
    return s;
  }
  if (id == "maglev-smcbf-real") {
    Scenario s = maglev_base(id);
    use_smcbf_maglev(s);
    s.perturbation = kMaglevReal;
    s.promises_safety = true;
    return s;
  }
  throw std::invalid_argument("unknown experiment id '" + std::string(id) + "'");
}

}  // namespace smcbf::sim
