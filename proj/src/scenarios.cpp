#include "fusekit/scenarios.hpp"

#include <cmath>
#include <string>

#include "fusekit/rng.hpp"

namespace fusekit {

namespace {

// Variance floor so a noiseless measurement channel still yields an SPD R.
constexpr double kMeasurementVarianceFloor = 1e-9;
// Decorrelates the measurement-noise stream from the truth stream.
constexpr std::uint64_t kMeasurementStreamSalt = 0xda3e39cb94b95bdbULL;

double floored_variance(double sigma) {
  const double var = sigma * sigma;
  return var > kMeasurementVarianceFloor ? var : kMeasurementVarianceFloor;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw DomainError(std::string(name) + " must be > 0");
  }
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0)) {
    throw DomainError(std::string(name) + " must be >= 0");
  }
}

}  // namespace

void PendulumParams::validate() const {
  require_positive(gravity, "g");
  require_positive(length, "l");
  require_positive(mass, "m");
  require_positive(dt, "dt");
  require_positive(duration, "duration");
  require_positive(rate_hz, "rate_hz");
  require_nonnegative(sigma_r, "sigma_r");
  require_nonnegative(sigma_o, "sigma_o");
  if (filter_sigma_r) require_nonnegative(*filter_sigma_r, "filter_sigma_r");
  const double steps = 1.0 / (rate_hz * dt);
  if (std::abs(steps - std::round(steps)) * dt > 1e-9) {
    throw DomainError("dt must divide the measurement interval 1/rate_hz");
  }
}

int PendulumParams::steps_per_measurement() const {
  return static_cast<int>(std::lround(1.0 / (rate_hz * dt)));
}

void TrackingParams::validate() const {
  require_positive(dt, "dt");
  require_positive(duration, "duration");
  require_nonnegative(sigma_a, "sigma_a");
  require_nonnegative(sigma_pos, "sigma_pos");
}

Eigen::Index ScenarioTrace::meas_dim() const {
  for (const auto& rec : records) {
    if (rec.z) return rec.z->size();
  }
  return 0;
}

std::pair<DiscreteLinearModel, MeasurementModel> build_pendulum_models(
    const PendulumParams& p) {
  p.validate();
  Mat a(2, 2);
  a << 0.0, 1.0, -p.gravity / p.length, 0.0;
  const Mat f = matlib::matrix_exponential(a, p.dt);

  Mat l(2, 1);
  l << 0.0, 1.0;
  const double ml2 = p.mass * p.length * p.length;
  const double sigma_r = p.filter_sigma_r.value_or(p.sigma_r);
  const double kick_std = p.dt * sigma_r / ml2;
  Mat q(1, 1);
  q << kick_std * kick_std;

  DiscreteLinearModel process(f, Mat::Zero(2, 0), l, q, p.dt);

  Mat h(1, 2);
  h << 1.0, 0.0;
  Mat r(1, 1);
  r << floored_variance(p.sigma_o);
  MeasurementModel meas(h, r);
  return {std::move(process), std::move(meas)};
}

std::pair<DiscreteLinearModel, MeasurementModel> build_tracking_models(
    const TrackingParams& p) {
  p.validate();
  Mat f = Mat::Identity(4, 4);
  f(0, 1) = p.dt;
  f(2, 3) = p.dt;

  Mat l = Mat::Zero(4, 2);
  l(0, 0) = 0.5 * p.dt * p.dt;
  l(1, 0) = p.dt;
  l(2, 1) = 0.5 * p.dt * p.dt;
  l(3, 1) = p.dt;
  const Mat q = p.sigma_a * p.sigma_a * Mat::Identity(2, 2);

  DiscreteLinearModel process(f, Mat::Zero(4, 0), l, q, p.dt);

  Mat h = Mat::Zero(2, 4);
  h(0, 0) = 1.0;
  h(1, 2) = 1.0;
  const Mat r = floored_variance(p.sigma_pos) * Mat::Identity(2, 2);
  MeasurementModel meas(h, r);
  return {std::move(process), std::move(meas)};
}

Trajectory simulate_pendulum_truth(const PendulumParams& p,
                                   std::uint64_t noise_seed) {
  p.validate();
  Rng rng(noise_seed);
  const double ml2 = p.mass * p.length * p.length;
  const double omega2 = p.gravity / p.length;
  const int n_steps = static_cast<int>(std::lround(p.duration / p.dt));

  Trajectory traj;
  traj.t.reserve(n_steps + 1);
  traj.x.reserve(n_steps + 1);
  Vec x(2);
  x << p.theta0, p.theta_dot0;
  traj.t.push_back(0.0);
  traj.x.push_back(x);

  const auto deriv = [&](const Vec& state, double accel_noise) {
    Vec d(2);
    d << state[1], -omega2 * std::sin(state[0]) + accel_noise;
    return d;
  };

  for (int k = 1; k <= n_steps; ++k) {
    const double torque = rng.next_gaussian(0.0, p.sigma_r);
    const double accel_noise = torque / ml2;
    const Vec k1 = deriv(x, accel_noise);
    const Vec k2 = deriv(x + 0.5 * p.dt * k1, accel_noise);
    const Vec k3 = deriv(x + 0.5 * p.dt * k2, accel_noise);
    const Vec k4 = deriv(x + p.dt * k3, accel_noise);
    x += (p.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.t.push_back(k * p.dt);
    traj.x.push_back(x);
  }
  return traj;
}

Trajectory simulate_pendulum_truth_linear(const PendulumParams& p,
                                          std::uint64_t noise_seed) {
  p.validate();
  Rng rng(noise_seed);
  Mat a(2, 2);
  a << 0.0, 1.0, -p.gravity / p.length, 0.0;
  const Mat f = matlib::matrix_exponential(a, p.dt);
  const double ml2 = p.mass * p.length * p.length;
  const int n_steps = static_cast<int>(std::lround(p.duration / p.dt));

  Trajectory traj;
  traj.t.reserve(n_steps + 1);
  traj.x.reserve(n_steps + 1);
  Vec x(2);
  x << p.theta0, p.theta_dot0;
  traj.t.push_back(0.0);
  traj.x.push_back(x);

  for (int k = 1; k <= n_steps; ++k) {
    const double torque = rng.next_gaussian(0.0, p.sigma_r);
    x = f * x;
    x[1] += p.dt * torque / ml2;
    traj.t.push_back(k * p.dt);
    traj.x.push_back(x);
  }
  return traj;
}

Trajectory simulate_tracking_truth(const TrackingParams& p,
                                   std::uint64_t noise_seed) {
  p.validate();
  Rng rng(noise_seed);
  auto [process, meas] = build_tracking_models(p);
  (void)meas;
  const int n_steps = static_cast<int>(std::lround(p.duration / p.dt));

  Trajectory traj;
  traj.t.reserve(n_steps + 1);
  traj.x.reserve(n_steps + 1);
  Vec x = p.x0;
  traj.t.push_back(0.0);
  traj.x.push_back(x);
  const Vec u0(0);

  for (int k = 1; k <= n_steps; ++k) {
    Vec w(2);
    w << rng.next_gaussian(0.0, p.sigma_a), rng.next_gaussian(0.0, p.sigma_a);
    x = step_discrete(process, x, u0, w);
    traj.t.push_back(k * p.dt);
    traj.x.push_back(x);
  }
  return traj;
}

namespace {

// Shared filter loop: predicts every truth step, updates every
// steps_per_meas steps, initializes from the measurement at t = 0.
ScenarioTrace run_filter(const Trajectory& truth,
                         const DiscreteLinearModel& process,
                         const MeasurementModel& meas, int steps_per_meas,
                         double sigma_o_effective, std::uint64_t seed) {
  Rng meas_rng(seed ^ kMeasurementStreamSalt);
  const Eigen::Index d = meas.meas_dim();
  const Vec u0(0);

  const auto draw_measurement = [&](const Vec& x_true) {
    Vec v(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      v[i] = meas_rng.next_gaussian(0.0, sigma_o_effective);
    }
    return Vec(meas.h * x_true + v);
  };

  ScenarioTrace trace;
  trace.records.reserve(truth.x.size());

  const Vec z0 = draw_measurement(truth.x.front());
  FilterEstimate est = estimate_from_first_measurement(meas, z0);

  const auto record = [&](double t, const Vec& x_true,
                          std::optional<Vec> z, std::optional<Vec> nu) {
    TraceRecord rec;
    rec.t = t;
    rec.x_true = x_true;
    rec.x_hat = est.belief.mean;
    rec.p_diag = est.belief.cov.diagonal();
    rec.three_sigma = 3.0 * rec.p_diag.cwiseMax(0.0).cwiseSqrt();
    rec.z = std::move(z);
    rec.nu = std::move(nu);
    trace.records.push_back(std::move(rec));
  };

  record(0.0, truth.x.front(), z0, std::nullopt);

  for (std::size_t k = 1; k < truth.x.size(); ++k) {
    est = kf_predict(est, process, u0);
    std::optional<Vec> z;
    std::optional<Vec> nu;
    if (static_cast<int>(k) % steps_per_meas == 0) {
      z = draw_measurement(truth.x[k]);
      auto [posterior, innovation] = kf_update(est, meas, *z);
      est = std::move(posterior);
      nu = innovation.nu;
      trace.innovations.push_back(std::move(innovation));
      trace.innovation_times.push_back(truth.t[k]);
    }
    record(truth.t[k], truth.x[k], std::move(z), std::move(nu));
  }

  trace.summary = compute_metrics(trace);
  return trace;
}

}  // namespace

ScenarioTrace run_scenario(const PendulumParams& p, std::uint64_t seed) {
  p.validate();
  const Trajectory truth = p.linear_truth
                               ? simulate_pendulum_truth_linear(p, seed)
                               : simulate_pendulum_truth(p, seed);
  auto [process, meas] = build_pendulum_models(p);
  return run_filter(truth, process, meas, p.steps_per_measurement(), p.sigma_o,
                    seed);
}

ScenarioTrace run_scenario(const TrackingParams& p, std::uint64_t seed) {
  p.validate();
  const Trajectory truth = simulate_tracking_truth(p, seed);
  auto [process, meas] = build_tracking_models(p);
  return run_filter(truth, process, meas, /*steps_per_meas=*/1, p.sigma_pos,
                    seed);
}

ScenarioSummary compute_metrics(const ScenarioTrace& trace) {
  if (trace.records.empty()) {
    throw DomainError("compute_metrics: empty trace");
  }
  const Eigen::Index n = trace.state_dim();
  const double count = static_cast<double>(trace.records.size());

  Vec sq_err = Vec::Zero(n);
  Vec contained = Vec::Zero(n);
  for (const auto& rec : trace.records) {
    const Vec err = rec.x_hat - rec.x_true;
    sq_err += err.cwiseProduct(err);
    for (Eigen::Index i = 0; i < n; ++i) {
      // Boundary inclusive: an error exactly at 3 sigma counts.
      if (std::abs(err[i]) <= rec.three_sigma[i]) contained[i] += 1.0;
    }
  }

  ScenarioSummary summary;
  summary.rmse = (sq_err / count).cwiseSqrt();
  summary.containment = contained / count;
  if (trace.innovations.size() >= 2) {
    const InnovationSummary stats = innovation_stats(trace.innovations);
    summary.innovation_mean = stats.mean;
    summary.innovation_cov = stats.sample_cov;
    summary.mean_nis = stats.mean_nis;
  } else {
    summary.innovation_mean = Vec::Zero(0);
    summary.innovation_cov = Mat::Zero(0, 0);
    summary.mean_nis = 0.0;
  }
  return summary;
}

std::vector<double> windowed_mean_nis(const ScenarioTrace& trace,
                                      double window_seconds) {
  if (!(window_seconds > 0.0)) {
    throw DomainError("windowed_mean_nis: window must be > 0");
  }
  std::vector<double> sums;
  std::vector<int> counts;
  for (std::size_t i = 0; i < trace.innovations.size(); ++i) {
    // Updates land on window boundaries; the boundary sample belongs to
    // the window it closes.
    auto w = static_cast<std::size_t>(
        std::ceil(trace.innovation_times[i] / window_seconds - 1e-12)) - 1;
    if (w >= sums.size()) {
      sums.resize(w + 1, 0.0);
      counts.resize(w + 1, 0);
    }
    sums[w] += trace.innovations[i].nis;
    counts[w] += 1;
  }
  std::vector<double> means(sums.size());
  for (std::size_t w = 0; w < sums.size(); ++w) {
    means[w] = counts[w] > 0 ? sums[w] / counts[w] : 0.0;
  }
  return means;
}

}  // namespace fusekit
