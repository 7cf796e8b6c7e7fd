#include <doctest.h>

#include <cmath>

#include "fusekit/scenarios.hpp"
#include "test_support.hpp"

using namespace fusekit;
using fusekit::test::max_abs_diff;
using fusekit::test::pendulum_period_ratio;

namespace {

// Period from successive downward zero crossings, linearly interpolated.
double measured_period(const Trajectory& traj) {
  std::vector<double> crossings;
  for (std::size_t i = 1; i < traj.x.size(); ++i) {
    const double prev = traj.x[i - 1][0];
    const double curr = traj.x[i][0];
    if (prev > 0.0 && curr <= 0.0) {
      const double frac = prev / (prev - curr);
      crossings.push_back(traj.t[i - 1] +
                          frac * (traj.t[i] - traj.t[i - 1]));
    }
  }
  REQUIRE(crossings.size() >= 2);
  return crossings[1] - crossings[0];
}

}  // namespace

TEST_CASE("build_pendulum_models: matrices take the documented form") {
  PendulumParams p;
  const auto [process, meas] = build_pendulum_models(p);

  // H selects theta only; R is the measurement variance.
  CHECK(meas.h(0, 0) == 1.0);
  CHECK(meas.h(0, 1) == 0.0);
  CHECK(meas.r(0, 0) == doctest::Approx(0.0025).epsilon(1e-12));

  // Noise enters theta-dot only.
  CHECK(process.l(0, 0) == 0.0);
  CHECK(process.l(1, 0) == 1.0);

  // F = e^{A dt} at g/l = 9.81, dt = 0.1; closed-form cos/sin oracle.
  Mat f_expected(2, 2);
  f_expected << 0.95135, 0.09837, -0.96504, 0.95135;
  PendulumParams coarse = p;
  coarse.dt = 0.1;
  const auto [process_coarse, meas_coarse] = build_pendulum_models(coarse);
  CHECK(max_abs_diff(process_coarse.f, f_expected) <= 1e-4);
  const double omega = std::sqrt(9.81);
  CHECK(max_abs_diff(process_coarse.f,
                     fusekit::test::harmonic_oscillator_exp(omega, 0.1)) <=
        1e-12);
}

TEST_CASE("build_pendulum_models: filter_sigma_r overrides the torque noise") {
  PendulumParams p;
  p.filter_sigma_r = 0.0;
  const auto [process, meas] = build_pendulum_models(p);
  CHECK(process.q(0, 0) == 0.0);
}

TEST_CASE("pendulum params: dt must divide the measurement interval") {
  PendulumParams p;
  p.dt = 0.03;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.dt = 0.01;
  CHECK_NOTHROW(p.validate());
  CHECK(p.steps_per_measurement() == 10);
}

TEST_CASE("simulate_pendulum_truth: equilibrium stays at rest") {
  PendulumParams p;
  p.theta0 = 0.0;
  p.sigma_r = 0.0;
  const Trajectory traj = simulate_pendulum_truth(p, 1);
  for (const Vec& x : traj.x) {
    CHECK(x.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("simulate_pendulum_truth: small-angle period") {
  PendulumParams p;
  p.sigma_r = 0.0;
  const Trajectory traj = simulate_pendulum_truth(p, 1);
  const double small_angle = 2.0 * M_PI * std::sqrt(p.length / p.gravity);
  CHECK(small_angle == doctest::Approx(2.0064).epsilon(1e-3));
  CHECK(measured_period(traj) ==
        doctest::Approx(small_angle).epsilon(0.01));
}

TEST_CASE("simulate_pendulum_truth: 45-degree period stretch matches the "
          "elliptic-integral oracle") {
  PendulumParams p;
  p.theta0 = 45.0 * kDegToRad;
  p.sigma_r = 0.0;
  const Trajectory traj = simulate_pendulum_truth(p, 1);
  const double small_angle = 2.0 * M_PI * std::sqrt(p.length / p.gravity);
  const double ratio = measured_period(traj) / small_angle;
  const double oracle = pendulum_period_ratio(p.theta0);
  CHECK(oracle == doctest::Approx(1.040).epsilon(1e-3));
  CHECK(ratio == doctest::Approx(oracle).epsilon(0.005));
}

TEST_CASE("simulate_pendulum_truth: energy conservation under RK4") {
  PendulumParams p;
  p.sigma_r = 0.0;
  p.theta0 = 45.0 * kDegToRad;
  const Trajectory traj = simulate_pendulum_truth(p, 1);
  const auto energy = [&](const Vec& x) {
    return (1.0 - std::cos(x[0])) * p.gravity * p.length +
           0.5 * p.length * p.length * x[1] * x[1];
  };
  const double e0 = energy(traj.x.front());
  for (const Vec& x : traj.x) {
    CHECK(std::abs(energy(x) - e0) <= 1e-6 * e0);
  }
}

TEST_CASE("linear vs nonlinear pendulum gap grows with amplitude") {
  PendulumParams p;
  p.sigma_r = 0.0;

  const auto max_gap = [&](double theta0) {
    PendulumParams q = p;
    q.theta0 = theta0;
    const Trajectory nl = simulate_pendulum_truth(q, 1);
    const Trajectory lin = simulate_pendulum_truth_linear(q, 1);
    double gap = 0.0;
    for (std::size_t i = 0; i < nl.x.size(); ++i) {
      gap = std::max(gap, std::abs(nl.x[i][0] - lin.x[i][0]));
    }
    // Normalized by the peak-to-peak amplitude 2 theta0.
    return gap / (2.0 * theta0);
  };

  CHECK(max_gap(10.0 * kDegToRad) < 0.05);
  CHECK(max_gap(45.0 * kDegToRad) > 0.20);
}

TEST_CASE("simulate_tracking_truth: straight-line motion without noise") {
  TrackingParams p;
  p.sigma_a = 0.0;
  const Trajectory traj = simulate_tracking_truth(p, 1);
  for (std::size_t i = 0; i < traj.x.size(); ++i) {
    const double t = traj.t[i];
    CHECK(traj.x[i][0] == doctest::Approx(t).epsilon(1e-12));
    CHECK(traj.x[i][2] == doctest::Approx(2.0 * t).epsilon(1e-12));
  }
}

TEST_CASE("simulate_tracking_truth: zero velocity stays put") {
  TrackingParams p;
  p.sigma_a = 0.0;
  p.x0 = Eigen::Vector4d{1.0, 0.0, -2.0, 0.0};
  const Trajectory traj = simulate_tracking_truth(p, 1);
  CHECK(max_abs_diff(traj.x.back(), traj.x.front()) == 0.0);
}

TEST_CASE("simulate_tracking_truth: same seed reproduces the trajectory") {
  TrackingParams p;
  const Trajectory a = simulate_tracking_truth(p, 42);
  const Trajectory b = simulate_tracking_truth(p, 42);
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    CHECK(max_abs_diff(a.x[i], b.x[i]) == 0.0);
  }
}

TEST_CASE("run_scenario: paper-shaped pendulum run") {
  PendulumParams p;
  const ScenarioTrace trace = run_scenario(p, 7);
  CHECK(trace.records.size() == 1001);  // t = 0 plus 1000 truth steps
  CHECK(trace.innovations.size() == 100);
  // Updates land exactly on multiples of the measurement interval.
  for (const double t : trace.innovation_times) {
    const double multiple = t * p.rate_hz;
    CHECK(std::abs(multiple - std::round(multiple)) <= 1e-9);
  }
  // three_sigma is exactly 3 sqrt(p_diag).
  for (const auto& rec : trace.records) {
    for (Eigen::Index i = 0; i < rec.p_diag.size(); ++i) {
      CHECK(rec.three_sigma[i] ==
            doctest::Approx(3.0 * std::sqrt(rec.p_diag[i])).epsilon(1e-15));
    }
  }
}

TEST_CASE("run_scenario: noiseless self-consistent linear system is exact") {
  PendulumParams p;
  p.sigma_o = 0.0;
  p.sigma_r = 0.0;
  p.linear_truth = true;
  const ScenarioTrace trace = run_scenario(p, 3);
  double worst = 0.0;
  bool seen_update = false;
  for (const auto& rec : trace.records) {
    if (rec.nu) seen_update = true;
    if (seen_update) {
      worst = std::max(worst, std::abs(rec.x_hat[0] - rec.x_true[0]));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("run_scenario: identical params and seed give identical traces") {
  PendulumParams p;
  const ScenarioTrace a = run_scenario(p, 99);
  const ScenarioTrace b = run_scenario(p, 99);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(max_abs_diff(a.records[i].x_hat, b.records[i].x_hat) == 0.0);
    CHECK(max_abs_diff(a.records[i].x_true, b.records[i].x_true) == 0.0);
  }
}

TEST_CASE("run_scenario: innovations have near-zero mean when matched") {
  PendulumParams p;
  const ScenarioTrace trace = run_scenario(p, 5);
  const auto& summary = trace.summary;
  double mean_s = 0.0;
  for (const auto& rec : trace.innovations) mean_s += rec.s(0, 0);
  mean_s /= static_cast<double>(trace.innovations.size());
  const double bound =
      3.0 * std::sqrt(mean_s / static_cast<double>(trace.innovations.size()));
  CHECK(std::abs(summary.innovation_mean[0]) <= bound);
}

TEST_CASE("run_scenario: tracking filter stays consistent") {
  TrackingParams p;
  const ScenarioTrace trace = run_scenario(p, 11);
  CHECK(trace.summary.containment.minCoeff() >= 0.9);
  // NIS mean near the measurement dimension d = 2.
  CHECK(trace.summary.mean_nis > 1.0);
  CHECK(trace.summary.mean_nis < 3.5);
}

TEST_CASE("compute_metrics: perfect estimates and boundary inclusion") {
  ScenarioTrace trace;
  for (int k = 0; k < 3; ++k) {
    TraceRecord rec;
    rec.t = 0.1 * k;
    rec.x_true = Vec::Ones(1);
    rec.x_hat = Vec::Ones(1);
    rec.p_diag = Vec::Zero(1);
    rec.three_sigma = Vec::Zero(1);
    trace.records.push_back(rec);
  }
  auto summary = compute_metrics(trace);
  CHECK(summary.rmse[0] == 0.0);
  CHECK(summary.containment[0] == 1.0);

  // Error exactly at the 3 sigma boundary still counts as contained.
  for (auto& rec : trace.records) {
    rec.x_hat[0] = 1.5;
    rec.p_diag[0] = 0.5 * 0.5 / 9.0;
    rec.three_sigma[0] = 0.5;
  }
  summary = compute_metrics(trace);
  CHECK(summary.containment[0] == 1.0);

  CHECK_THROWS_AS(compute_metrics(ScenarioTrace{}), DomainError);
}

TEST_CASE("windowed_mean_nis: assigns updates to closing windows") {
  ScenarioTrace trace;
  for (int i = 1; i <= 4; ++i) {
    trace.innovations.push_back(
        InnovationRecord{Vec::Zero(1), Mat::Identity(1, 1), double(i)});
    trace.innovation_times.push_back(0.5 * i);  // 0.5, 1.0, 1.5, 2.0
  }
  const auto means = windowed_mean_nis(trace, 1.0);
  REQUIRE(means.size() == 2);
  CHECK(means[0] == doctest::Approx(1.5));  // NIS 1, 2
  CHECK(means[1] == doctest::Approx(3.5));  // NIS 3, 4
}
