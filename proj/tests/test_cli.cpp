#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fusekit/config.hpp"
#include "fusekit/trace_io.hpp"

using namespace fusekit;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("parse_config: paper-shaped pendulum run with defaults elsewhere") {
  const auto config = parse_config(
      "scenario = pendulum\n"
      "duration_s = 10\n"
      "rate_hz = 10\n"
      "theta0_deg = 10  # paper setup\n");
  CHECK(config.scenario == ScenarioKind::kPendulum);
  CHECK(config.pendulum.duration == 10.0);
  CHECK(config.pendulum.rate_hz == 10.0);
  CHECK(config.pendulum.theta0 == doctest::Approx(10.0 * kDegToRad));
  // Artifact defaults fill the rest.
  CHECK(config.pendulum.sigma_o == 0.05);
  CHECK(config.pendulum.sigma_r == 0.5);
  CHECK(config.pendulum.dt == 0.01);
  CHECK(config.seeds == std::vector<std::uint64_t>{1});
}

TEST_CASE("parse_config: empty document is missing the scenario") {
  CHECK_THROWS_WITH_AS(parse_config(""), doctest::Contains("scenario"),
                       ConfigError);
}

TEST_CASE("parse_config: constraint violations name the key") {
  CHECK_THROWS_WITH_AS(
      parse_config("scenario = pendulum\ndt_s = -0.1\n"),
      doctest::Contains("dt_s"), DomainError);
}

TEST_CASE("parse_config: unknown keys are rejected with line numbers") {
  CHECK_THROWS_WITH_AS(
      parse_config("scenario = pendulum\nbogus_key = 1\n"),
      doctest::Contains("bogus_key"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config("scenario = pendulum\nbogus_key = 1\n"),
      doctest::Contains("line 2"), ConfigError);
}

TEST_CASE("parse_config: malformed line reports its number") {
  CHECK_THROWS_WITH_AS(parse_config("scenario = pendulum\nnot a pair\n"),
                       doctest::Contains("line 2"), ConfigError);
}

TEST_CASE("parse_config: seed spellings") {
  auto single = parse_config("scenario = tracking\nseed = 9\n");
  CHECK(single.seeds == std::vector<std::uint64_t>{9});

  auto batch = parse_config("scenario = tracking\nseeds = 3\nbase_seed = 5\n");
  CHECK(batch.seeds == std::vector<std::uint64_t>{5, 6, 7});

  CHECK_THROWS_AS(parse_config("scenario = tracking\nseed = 1\nseeds = 2\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("scenario = tracking\nbase_seed = 2\n"),
                  ConfigError);
}

TEST_CASE("property: parse_config(render_config(c)) round-trips") {
  RunConfig pendulum;
  pendulum.scenario = ScenarioKind::kPendulum;
  pendulum.pendulum.theta0 = 45.0 * kDegToRad;
  pendulum.pendulum.filter_sigma_r = 2.0;
  pendulum.pendulum.duration = 60.0;
  pendulum.seeds = {10, 11, 12};
  pendulum.output_dir = "out";
  pendulum.emit_plot_data = true;
  CHECK(parse_config(render_config(pendulum)) == pendulum);

  RunConfig tracking;
  tracking.scenario = ScenarioKind::kTracking;
  tracking.tracking.sigma_a = 0.7;
  tracking.tracking.x0 = Eigen::Vector4d{0.1, -0.2, 0.3, 0.4};
  CHECK(parse_config(render_config(tracking)) == tracking);
}

TEST_CASE("trace CSV: schema, NA tokens, and bit-identical reruns") {
  PendulumParams p;
  p.duration = 1.0;
  const ScenarioTrace trace = run_scenario(p, 4);
  const std::string csv = trace_to_csv(trace);

  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "t,x_true_0,x_true_1,z_0,x_hat_0,x_hat_1,p_diag_0,p_diag_1,nu_0,"
        "sig3_0,sig3_1");

  std::string second;
  std::getline(lines, second);  // row after t = 0; no measurement there
  CHECK(second.find(",NA,") != std::string::npos);

  CHECK(csv == trace_to_csv(run_scenario(p, 4)));
}

TEST_CASE("run_command: writes trace files and a pooled summary") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fusekit_test_run";
  fs::remove_all(dir);

  RunConfig config;
  config.scenario = ScenarioKind::kPendulum;
  config.pendulum.duration = 2.0;
  config.seeds = {1, 2};
  config.output_dir = dir.string();
  config.emit_plot_data = true;

  CHECK(run_command(config) == 0);
  CHECK(fs::exists(dir / "trace_1.csv"));
  CHECK(fs::exists(dir / "trace_2.csv"));
  CHECK(fs::exists(dir / "plot_1.csv"));
  CHECK(fs::exists(dir / "summary.txt"));

  const std::string summary = slurp(dir / "summary.txt");
  CHECK(summary.find("mean_nis:") != std::string::npos);
  CHECK(summary.find("containment_0:") != std::string::npos);
  // The resolved configuration is echoed, defaults included.
  CHECK(summary.find("sigma_o = 0.05") != std::string::npos);

  // Summary values come straight from compute_metrics, not re-derived.
  const ScenarioTrace t1 = run_scenario(config.pendulum, 1);
  const ScenarioTrace t2 = run_scenario(config.pendulum, 2);
  const double pooled_nis = 0.5 * (t1.summary.mean_nis + t2.summary.mean_nis);
  CHECK(summary.find("mean_nis: " + format_real(pooled_nis)) !=
        std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("run_command: rerun reproduces the trace file byte-for-byte") {
  namespace fs = std::filesystem;
  const fs::path dir_a = fs::temp_directory_path() / "fusekit_det_a";
  const fs::path dir_b = fs::temp_directory_path() / "fusekit_det_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  RunConfig config;
  config.scenario = ScenarioKind::kTracking;
  config.tracking.duration = 2.0;
  config.seeds = {77};

  config.output_dir = dir_a.string();
  CHECK(run_command(config) == 0);
  config.output_dir = dir_b.string();
  CHECK(run_command(config) == 0);

  CHECK(slurp(dir_a / "trace_77.csv") == slurp(dir_b / "trace_77.csv"));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}
