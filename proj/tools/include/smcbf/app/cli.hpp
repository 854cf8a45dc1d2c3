#pragma once

#include "smcbf/app/config.hpp"
#include "smcbf/sim.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace smcbf::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  // A scenario that promises safety left the safe set.
  kExitSafetyViolation = 2,
};

/// Where a scenario came from, echoed into manifest.json.
struct RunSource {
  std::optional<std::string> experiment;
  std::optional<std::filesystem::path> config;
};

struct RunResult {
  sim::Metrics metrics;
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> artifacts;
  bool promised_safety_violated = false;
};

/// Simulates and writes trajectory.csv, metrics.json, optional plots and
/// finally manifest.json (with checksums of the other files) into `out`.
RunResult run_and_write(const sim::Scenario& scenario, const RunSource& source,
                        const std::filesystem::path& out, bool plot);

/// Parses `field=scale`; throws std::invalid_argument on malformed input.
std::pair<std::string, double> parse_perturbation(const std::string& spec);

/// Entry point of the `smcbf` executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smcbf::app
