#include "smcbf/app/cli.hpp"
#include "smcbf/app/config.hpp"
#include "smcbf/app/output.hpp"
#include "smcbf/experiments.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

using namespace smcbf;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("smcbf_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "smcbf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = app::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TEST(Config, RoundTripsEveryExperiment) {
  for (const auto& info : sim::list_experiments()) {
    const sim::Scenario s = sim::make_experiment(info.id);
    const app::Json doc = app::scenario_to_json(s);
    const sim::Scenario back = app::scenario_from_json(app::Json::parse(doc.dump()));
    EXPECT_EQ(app::scenario_to_json(back), doc) << info.id;
  }
}

// The shipped configuration files describe the built-in experiments.
TEST(Config, ShippedScenarioFilesMatchExperiments) {
  for (const auto& info : sim::list_experiments()) {
    const fs::path file = fs::path(SMCBF_SCENARIO_DIR) / (std::string(info.id) + ".json");
    ASSERT_TRUE(fs::exists(file)) << file;
    EXPECT_EQ(app::scenario_to_json(app::load_scenario(file)),
              app::scenario_to_json(sim::make_experiment(info.id)))
        << info.id;
  }
}

TEST(Config, MissingFieldsTakeDefaults) {
  const auto doc = app::Json::parse(R"({"plant": {"type": "furuta"}, "initial_state": [0, 0.01, 0, 0]})");
  const sim::Scenario s = app::scenario_from_json(doc);
  EXPECT_TRUE(s.is_furuta());
  EXPECT_EQ(s.filter.mode, sim::FilterMode::kNone);
  EXPECT_EQ(s.dt, 1e-3);
}

std::string config_error(const std::string& text) {
  try {
    app::scenario_from_json(app::Json::parse(text));
  } catch (const app::ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(config_error(R"({"plant": {"type": "boat"}, "initial_state": [0]})").find("/plant/type"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"plant": {"type": "furuta"}})").find("initial_state"), std::string::npos);
  EXPECT_NE(config_error(R"({"plant": {"type": "furuta"}, "initial_state": [0,0,0,0], "colour": 1})")
                .find("colour"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"plant": {"type": "furuta"}, "initial_state": [0,0,0,0], "dt": "x"})")
                .find("/dt"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"plant": {"type": "furuta"}, "initial_state": [0,0,0,0], "dt": 0})")
                .find("dt must be > 0"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"plant": {"type": "furuta"}, "initial_state": [0,0,0,0],
                             "filter": {"mode": "magic"}})")
                .find("none, ecbf, smcbf"),
            std::string::npos);
}

TEST(Config, SyntaxErrorsReportLineAndColumn) {
  TempDir dir;
  const fs::path p = dir.path() / "broken.json";
  std::ofstream(p) << "{\n  \"dt\": 1e-3,\n}\n";
  try {
    app::load_scenario(p);
    FAIL() << "expected ConfigError";
  } catch (const app::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.json:3:"), std::string::npos) << e.what();
  }
}

TEST(Output, FormatNumber) {
  EXPECT_EQ(app::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(app::format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(app::format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(std::stod(app::format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Output, CsvHeaderAndRows) {
  sim::Scenario s = sim::make_experiment("furuta-smcbf-real");
  s.duration = 0.01;
  const auto log = sim::run_closed_loop(s);
  std::ostringstream csv;
  app::write_trajectory_csv(log, csv);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header.rfind("t,theta0,", 0), 0u) << header;
  for (const char* col : {"y_theta0", "ref_theta0", "u_nominal_duty", "u_filtered_duty",
                          "u_applied_duty", "h_F", "h_F_sliding", "h_F_virtual_bound",
                          "qp_status", "clamp_hit"})
    EXPECT_NE(header.find(col), std::string::npos) << col;
  const auto columns = app::trajectory_columns(log);
  std::size_t rows = 0;
  for (std::string row; std::getline(lines, row);) {
    ++rows;
    EXPECT_EQ(static_cast<std::size_t>(std::count(row.begin(), row.end(), ',')) + 1, columns.size());
  }
  EXPECT_EQ(rows, log.records.size());
}

TEST(Output, MetricsJsonUsesNullForNonFinite) {
  sim::Metrics m;
  m.min_h = std::numeric_limits<double>::quiet_NaN();
  const app::Json j = app::metrics_to_json(m);
  EXPECT_TRUE(j.at("min_h").is_null());
}

TEST(Output, Sha256OfKnownBytes) {
  TempDir dir;
  std::ofstream(dir.path() / "abc.txt", std::ios::binary) << "abc";
  EXPECT_EQ(app::sha256_file(dir.path() / "abc.txt"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, ListShowsAllExperiments) {
  const CliRun r = cli({"list"});
  EXPECT_EQ(r.code, 0);
  for (const auto& info : sim::list_experiments())
    EXPECT_NE(r.out.find(std::string(info.id)), std::string::npos) << info.id;
  EXPECT_NE(r.out.find("10"), std::string::npos);
}

TEST(Cli, RunWritesArtifactsAndManifestReproducesTrajectory) {
  TempDir dir;
  const fs::path first = dir.path() / "first";
  const CliRun r = cli({"run", "furuta-smcbf-real", "--duration", "2", "--out", first.string(), "--plot"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"trajectory.csv", "metrics.json", "manifest.json", "barrier.svg", "sliding.svg"})
    EXPECT_TRUE(fs::exists(first / f)) << f;

  const app::Json manifest = app::Json::parse(slurp(first / "manifest.json"));
  EXPECT_EQ(manifest.at("experiment"), "furuta-smcbf-real");
  EXPECT_EQ(manifest.at("artifacts").at("trajectory.csv"),
            app::sha256_file(first / "trajectory.csv"));

  const fs::path second = dir.path() / "second";
  const CliRun again = cli({"run", "--config", (first / "manifest.json").string(), "--out", second.string()});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(slurp(first / "trajectory.csv"), slurp(second / "trajectory.csv"));

  const app::Json metrics = app::Json::parse(slurp(first / "metrics.json"));
  EXPECT_GE(metrics.at("min_h").get<double>(), 0.0);
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  // Demonstration of a violation is not an error.
  EXPECT_EQ(cli({"run", "furuta-ecbf-real", "--out", (dir.path() / "a").string()}).code, 0);
  EXPECT_EQ(cli({"run", "nope", "--out", (dir.path() / "b").string()}).code, 1);
  EXPECT_EQ(cli({"run", "furuta-lqr", "--dt", "0", "--out", (dir.path() / "c").string()}).code, 1);
  EXPECT_EQ(cli({"run", "furuta-lqr", "--perturb", "bogus=2", "--out", (dir.path() / "d").string()}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);

  // A scenario that promises safety and breaks it exits with 2. Swapping the
  // robust filter for the plain ECBF on the heavy plant does that.
  sim::Scenario s = sim::make_experiment("furuta-smcbf-real");
  s.duration = 20.0;
  s.filter.mode = sim::FilterMode::kEcbf;
  s.filter.ecbf_gains = {Eigen::RowVector2d(3000.0, 180.0)};
  const fs::path cfg = dir.path() / "unsafe.json";
  std::ofstream(cfg) << app::scenario_to_json(s).dump(2);
  EXPECT_EQ(cli({"run", "--config", cfg.string(), "--out", (dir.path() / "e").string()}).code, 2);
}

TEST(Cli, PerturbationParsing) {
  EXPECT_EQ(app::parse_perturbation("mass=1.3"), std::make_pair(std::string("mass"), 1.3));
  EXPECT_THROW(app::parse_perturbation("mass"), std::invalid_argument);
  EXPECT_THROW(app::parse_perturbation("mass=abc"), std::invalid_argument);
  EXPECT_THROW(app::parse_perturbation("=2"), std::invalid_argument);
}

}  // namespace
