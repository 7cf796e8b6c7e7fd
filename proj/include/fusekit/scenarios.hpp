#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fusekit/kalman.hpp"
#include "fusekit/statespace.hpp"

namespace fusekit {

inline constexpr double kDegToRad = M_PI / 180.0;

/// Pendulum experiment configuration. Angles are radians internally;
/// degree conversion happens at the config boundary.
struct PendulumParams {
  double gravity = 9.81;          // m/s^2
  double length = 1.0;            // m
  double mass = 1.0;              // kg
  double theta0 = 10.0 * kDegToRad;  // rad
  double theta_dot0 = 0.0;        // rad/s
  double sigma_r = 0.5;           // random torque std dev, N*m
  double sigma_o = 0.05;          // angle measurement noise std dev, rad
  double dt = 0.01;               // s
  double duration = 10.0;         // s
  double rate_hz = 10.0;          // measurement rate, 1/s
  // Filter-side torque std dev when it deliberately differs from the
  // simulated one (the detuning studies); unset means matched.
  std::optional<double> filter_sigma_r;
  // Propagate truth with the linearized dynamics (sin theta -> theta)
  // instead of the nonlinear ODE.
  bool linear_truth = false;

  void validate() const;
  /// Truth steps between measurements, 1/(rate_hz * dt).
  int steps_per_measurement() const;
  bool operator==(const PendulumParams&) const = default;
};

/// 2D constant-velocity tracking configuration. State is
/// [px, vx, py, vy]; position of both axes is measured every step.
struct TrackingParams {
  double dt = 0.1;        // s
  double duration = 20.0; // s
  double sigma_a = 0.2;   // acceleration noise std dev per axis, m/s^2
  double sigma_pos = 1.0; // position measurement noise std dev per axis, m
  Eigen::Vector4d x0{0.0, 1.0, 0.0, 2.0};

  void validate() const;
  bool operator==(const TrackingParams&) const = default;
};

struct TraceRecord {
  double t = 0.0;
  Vec x_true;
  Vec x_hat;
  Vec p_diag;
  Vec three_sigma;  // 3 * sqrt(p_diag), stored explicitly
  std::optional<Vec> z;
  std::optional<Vec> nu;
};

struct ScenarioSummary {
  Vec rmse;              // per state
  Vec containment;       // per state, fraction with |err| <= 3 sigma
  Vec innovation_mean;
  Mat innovation_cov;
  double mean_nis = 0.0;
};

struct ScenarioTrace {
  std::vector<TraceRecord> records;
  std::vector<InnovationRecord> innovations;
  std::vector<double> innovation_times;
  ScenarioSummary summary;

  Eigen::Index state_dim() const { return records.front().x_true.size(); }
  Eigen::Index meas_dim() const;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Vec> x;
};

/// Discrete filter model for the pendulum: A = [[0,1],[-g/l,0]] discretized
/// over dt, noise column L = [0,1]^T, Q = (dt*sigma_r/(m l^2))^2, H = [1 0],
/// R = sigma_o^2. Uses filter_sigma_r when set.
std::pair<DiscreteLinearModel, MeasurementModel> build_pendulum_models(
    const PendulumParams& p);

/// Per-axis constant-velocity blocks F = [[1,dt],[0,1]] with noise input
/// L = [dt^2/2, dt]^T per axis, Q = sigma_a^2 I2; H selects both positions,
/// R = sigma_pos^2 I2.
std::pair<DiscreteLinearModel, MeasurementModel> build_tracking_models(
    const TrackingParams& p);

/// Nonlinear pendulum truth: RK4 on theta'' = -(g/l) sin theta + tau/(m l^2),
/// with the random torque redrawn each step and held across it.
Trajectory simulate_pendulum_truth(const PendulumParams& p,
                                   std::uint64_t noise_seed);

/// Linearized pendulum truth stepped with the exact discrete transition
/// e^{A dt} plus the per-step noise kick on theta_dot.
Trajectory simulate_pendulum_truth_linear(const PendulumParams& p,
                                          std::uint64_t noise_seed);

/// Constant-velocity truth with per-axis acceleration noise.
Trajectory simulate_tracking_truth(const TrackingParams& p,
                                   std::uint64_t noise_seed);

ScenarioTrace run_scenario(const PendulumParams& p, std::uint64_t seed);
ScenarioTrace run_scenario(const TrackingParams& p, std::uint64_t seed);

/// RMSE, three-sigma containment, and innovation statistics for a trace.
ScenarioSummary compute_metrics(const ScenarioTrace& trace);

/// Mean NIS per consecutive window of window_seconds; used to watch
/// filter divergence build up over a long run.
std::vector<double> windowed_mean_nis(const ScenarioTrace& trace,
                                      double window_seconds);

}  // namespace fusekit
