#include "fusekit/kalman.hpp"

#include <cmath>
#include <string>

namespace fusekit {

FilterEstimate kf_predict(const FilterEstimate& est,
                          const DiscreteLinearModel& model, const Vec& u) {
  if (est.belief.dim() != model.state_dim()) {
    throw ShapeError("kf_predict: estimate dim " +
                     std::to_string(est.belief.dim()) + " vs model dim " +
                     std::to_string(model.state_dim()));
  }
  if (u.size() != model.input_dim()) {
    throw ShapeError("kf_predict: u has size " + std::to_string(u.size()) +
                     ", expected " + std::to_string(model.input_dim()));
  }
  Vec mean = model.f * est.belief.mean + model.g * u;
  Mat cov = model.f * est.belief.cov * model.f.transpose() +
            model.l * model.q * model.l.transpose();
  cov = matlib::symmetrize(cov);
  return FilterEstimate{Gaussian(std::move(mean), std::move(cov)),
                        EstimateKind::kPrior, est.k + 1};
}

std::pair<FilterEstimate, InnovationRecord> kf_update(
    const FilterEstimate& est, const MeasurementModel& meas, const Vec& z) {
  const Eigen::Index n = est.belief.dim();
  if (meas.state_dim() != n) {
    throw ShapeError("kf_update: H has " + std::to_string(meas.state_dim()) +
                     " cols, expected " + std::to_string(n));
  }
  if (z.size() != meas.meas_dim()) {
    throw ShapeError("kf_update: z has size " + std::to_string(z.size()) +
                     ", expected " + std::to_string(meas.meas_dim()));
  }
  if (est.kind != EstimateKind::kPrior) {
    throw DomainError("kf_update: estimate must be a prior");
  }
  const Mat& h = meas.h;
  const Mat noise_cov = meas.effective_noise_cov();

  Vec nu = z - h * est.belief.mean;
  Mat s = matlib::symmetrize(h * est.belief.cov * h.transpose() + noise_cov);
  const Mat s_inv = matlib::invert(s);
  const Mat gain = est.belief.cov * h.transpose() * s_inv;

  Vec mean = est.belief.mean + gain * nu;
  const Mat residual_map = Mat::Identity(n, n) - gain * h;
  Mat cov = residual_map * est.belief.cov * residual_map.transpose() +
            gain * noise_cov * gain.transpose();
  cov = matlib::symmetrize(cov);

  const double nis = nu.dot(s_inv * nu);
  FilterEstimate posterior{Gaussian(std::move(mean), std::move(cov)),
                           EstimateKind::kPosterior, est.k};
  return {std::move(posterior),
          InnovationRecord{std::move(nu), std::move(s), nis}};
}

InnovationSummary innovation_stats(std::span<const InnovationRecord> records) {
  if (records.size() < 2) {
    throw DomainError("innovation_stats: need at least 2 records, got " +
                      std::to_string(records.size()));
  }
  const Eigen::Index d = records.front().nu.size();
  Vec mean = Vec::Zero(d);
  double nis_sum = 0.0;
  for (const auto& rec : records) {
    if (rec.nu.size() != d) {
      throw DomainError("innovation_stats: mixed innovation dimensions");
    }
    mean += rec.nu;
    nis_sum += rec.nis;
  }
  const double n = static_cast<double>(records.size());
  mean /= n;

  Mat sample_cov = Mat::Zero(d, d);
  for (const auto& rec : records) {
    const Vec centered = rec.nu - mean;
    sample_cov += centered * centered.transpose();
  }
  sample_cov /= (n - 1.0);
  return InnovationSummary{std::move(mean), std::move(sample_cov),
                           nis_sum / n};
}

FilterEstimate estimate_from_first_measurement(const MeasurementModel& meas,
                                               const Vec& z,
                                               double unobserved_inflation) {
  if (z.size() != meas.meas_dim()) {
    throw ShapeError("estimate_from_first_measurement: z has size " +
                     std::to_string(z.size()) + ", expected " +
                     std::to_string(meas.meas_dim()));
  }
  const Eigen::Index n = meas.state_dim();
  const Mat noise_cov = meas.effective_noise_cov();

  Vec mean = Vec::Zero(n);
  Vec var = Vec::Constant(n, -1.0);  // -1 marks unobserved
  double max_observed_var = 0.0;
  for (Eigen::Index i = 0; i < meas.meas_dim(); ++i) {
    Eigen::Index selected = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double entry = meas.h(i, j);
      if (entry == 0.0) continue;
      if (entry != 1.0 || selected >= 0) {
        throw DomainError(
            "estimate_from_first_measurement: H row " + std::to_string(i) +
            " is not a unit selector");
      }
      selected = j;
    }
    if (selected < 0) {
      throw DomainError("estimate_from_first_measurement: H row " +
                        std::to_string(i) + " is all zero");
    }
    mean[selected] = z[i];
    var[selected] = noise_cov(i, i);
    max_observed_var = std::max(max_observed_var, noise_cov(i, i));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (var[j] < 0.0) var[j] = unobserved_inflation * max_observed_var;
  }
  return FilterEstimate{Gaussian(std::move(mean), Mat(var.asDiagonal())),
                        EstimateKind::kPosterior, 0};
}

}  // namespace fusekit
