#pragma once

#include "smcbf/scenario.hpp"

#include "json.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace smcbf::app {

using Json = nlohmann::ordered_json;

/// Malformed or invalid scenario document. The message names the offending
/// field as a JSON pointer, or the line and column of a syntax error.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Complete document; every field is written so the result reproduces the
/// scenario exactly when read back.
Json scenario_to_json(const sim::Scenario& s);

/// Missing fields take the library defaults, except `plant.type` and
/// `initial_state`, which are required. Unknown fields are rejected. The
/// result is validated.
sim::Scenario scenario_from_json(const Json& doc);

/// Reads a scenario document, or a run manifest whose `scenario` member is
/// used instead.
sim::Scenario load_scenario(const std::filesystem::path& path);

}  // namespace smcbf::app
