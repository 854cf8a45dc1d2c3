#pragma once

#include "smcbf/scenario.hpp"

#include <span>
#include <string>
#include <string_view>

namespace smcbf::sim {

struct ExperimentInfo {
  std::string_view id;
  std::string_view description;
  int figure;
};

/// The eight built-in experiments in run order.
std::span<const ExperimentInfo> list_experiments();

/// Fully specified built-in scenario. Throws std::invalid_argument for an
/// unknown id.
Scenario make_experiment(std::string_view id);

}  // namespace smcbf::sim
