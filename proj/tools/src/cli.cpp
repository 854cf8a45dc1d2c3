#include "smcbf/app/cli.hpp"

#include "smcbf/app/output.hpp"
#include "smcbf/experiments.hpp"
#include "smcbf/rk4.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace smcbf::app {

namespace fs = std::filesystem;

std::pair<std::string, double> parse_perturbation(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
    throw std::invalid_argument("--perturb expects field=scale, got '" + spec + "'");
  const std::string value = spec.substr(eq + 1);
  std::size_t used = 0;
  double scale = 0.0;
  try {
    scale = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size())
    throw std::invalid_argument("--perturb scale for '" + spec.substr(0, eq) +
                                "' is not a number: '" + value + "'");
  return {spec.substr(0, eq), scale};
}

RunResult run_and_write(const sim::Scenario& scenario, const RunSource& source,
                        const fs::path& out, bool plot) {
  fs::create_directories(out);

  const sim::TrajectoryLog log = sim::run_closed_loop(scenario);
  RunResult result;
  result.metrics = sim::compute_metrics(log);
  result.output_dir = out;
  result.promised_safety_violated = scenario.promises_safety && result.metrics.safety_violated;

  auto open = [](const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
  };

  const fs::path csv = out / "trajectory.csv";
  {
    std::ofstream f = open(csv);
    write_trajectory_csv(log, f);
    if (!f) throw std::runtime_error("error while writing " + csv.string());
  }
  result.artifacts.push_back(csv);

  const fs::path metrics = out / "metrics.json";
  {
    std::ofstream f = open(metrics);
    f << metrics_to_json(result.metrics).dump(2) << '\n';
  }
  result.artifacts.push_back(metrics);

  if (plot) {
    for (const auto& p : write_plots(log, out)) result.artifacts.push_back(p);
  }

  Json checksums = Json::object();
  for (const auto& p : result.artifacts) checksums[p.filename().string()] = sha256_file(p);
  Json manifest = {
      {"experiment", source.experiment ? Json(*source.experiment) : Json(nullptr)},
      {"config", source.config ? Json(source.config->string()) : Json(nullptr)},
      {"output_dir", out.string()},
      {"scenario", scenario_to_json(scenario)},
      {"artifacts", checksums},
  };
  const fs::path manifest_path = out / "manifest.json";
  {
    std::ofstream f = open(manifest_path);
    f << manifest.dump(2) << '\n';
  }
  result.artifacts.push_back(manifest_path);
  return result;
}

namespace {

struct RunOptions {
  std::string experiment;
  std::string config;
  std::string out = "results";
  std::optional<double> dt;
  std::optional<double> duration;
  std::vector<std::string> perturb;
  bool plot = false;
  bool all = false;
};

void apply_overrides(sim::Scenario& s, const RunOptions& o) {
  if (o.dt) s.dt = *o.dt;
  if (o.duration) s.duration = *o.duration;
  for (const auto& spec : o.perturb) {
    const auto [field, scale] = parse_perturbation(spec);
    s.perturbation[field] = scale;
  }
  s.validate();
}

void print_summary(std::ostream& out, const std::string& label, const RunResult& r) {
  char line[160];
  std::snprintf(line, sizeof line, "%-20s min_h=% .6e violations=", label.c_str(),
                r.metrics.min_h);
  out << line;
  std::size_t intervals = 0;
  for (const auto& c : r.metrics.constraints) intervals += c.violations.size();
  out << intervals << " fallbacks=" << r.metrics.qp_fallbacks << " -> "
      << r.output_dir.string() << '\n';
}

int run_one(const sim::Scenario& base, const RunSource& source, const fs::path& out,
            const RunOptions& o, std::ostream& os, std::ostream& err) {
  sim::Scenario s = base;
  try {
    apply_overrides(s, o);
  } catch (const std::invalid_argument& e) {
    err << "error: invalid scenario: " << e.what() << '\n';
    return kExitError;
  }
  const RunResult r = run_and_write(s, source, out, o.plot);
  print_summary(os, s.name.empty() ? out.string() : s.name, r);
  if (r.promised_safety_violated) {
    err << "error: " << (s.name.empty() ? std::string("scenario") : s.name)
        << " promises safety but min h = " << r.metrics.min_h << '\n';
    return kExitSafetyViolation;
  }
  return kExitOk;
}

int list_command(std::ostream& out) {
  for (const auto& e : sim::list_experiments()) {
    char line[160];
    std::snprintf(line, sizeof line, "%-20s Fig. %-3d %s\n", std::string(e.id).c_str(), e.figure,
                  std::string(e.description).c_str());
    out << line;
  }
  return kExitOk;
}

int run_command(const RunOptions& o, std::ostream& out, std::ostream& err) {
  const int sources = (o.experiment.empty() ? 0 : 1) + (o.config.empty() ? 0 : 1) + (o.all ? 1 : 0);
  if (sources != 1) {
    err << "error: run needs exactly one of <id>, --config PATH or --all\n";
    return kExitError;
  }

  if (o.all) {
    int worst = kExitOk;
    for (const auto& e : sim::list_experiments()) {
      const std::string id(e.id);
      const int code = run_one(sim::make_experiment(id), {id, std::nullopt},
                               fs::path(o.out) / id, o, out, err);
      if (code == kExitError) return code;
      worst = std::max(worst, code);
    }
    return worst;
  }

  if (!o.config.empty()) {
    sim::Scenario s;
    try {
      s = load_scenario(o.config);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << '\n';
      return kExitError;
    }
    return run_one(s, {std::nullopt, fs::path(o.config)}, o.out, o, out, err);
  }

  sim::Scenario s;
  try {
    s = sim::make_experiment(o.experiment);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << " (see `smcbf list`)\n";
    return kExitError;
  }
  return run_one(s, {o.experiment, std::nullopt}, o.out, o, out, err);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Safety-filtered control simulations with sliding-mode barrier functions", "smcbf"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List the built-in experiments");

  RunOptions o;
  auto* run = app.add_subcommand("run", "Run a built-in experiment or a scenario file");
  run->add_option("id", o.experiment, "Built-in experiment id");
  run->add_option("--config", o.config, "Scenario JSON file (or a manifest.json)");
  run->add_option("--out", o.out, "Output directory")->capture_default_str();
  run->add_option("--dt", o.dt, "Override the integration step [s]");
  run->add_option("--duration", o.duration, "Override the simulated duration [s]");
  run->add_option("--perturb", o.perturb, "Scale a plant parameter, field=scale (repeatable)");
  run->add_flag("--plot", o.plot, "Write SVG plots");
  run->add_flag("--all", o.all, "Run every built-in experiment into <out>/<id>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    if (list->parsed()) return list_command(out);
    return run_command(o, out, err);
  } catch (const sim::IntegrationError& e) {
    err << "integration error: " << e.what() << '\n';
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace smcbf::app
