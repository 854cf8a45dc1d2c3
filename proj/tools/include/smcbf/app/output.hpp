#pragma once

#include "smcbf/app/config.hpp"
#include "smcbf/sim.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace smcbf::app {

/// Column names in CSV order.
std::vector<std::string> trajectory_columns(const sim::TrajectoryLog& log);

/// One header row, one row per record, numbers with 17 significant digits.
void write_trajectory_csv(const sim::TrajectoryLog& log, std::ostream& out);

Json metrics_to_json(const sim::Metrics& m);

/// 17 significant digits (exact round trip), or "nan", "inf", "-inf".
std::string format_number(double v);

/// Line charts of the logged channel groups; returns the written files.
std::vector<std::filesystem::path> write_plots(const sim::TrajectoryLog& log,
                                               const std::filesystem::path& dir);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace smcbf::app
