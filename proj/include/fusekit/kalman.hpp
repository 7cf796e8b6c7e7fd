#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fusekit/statespace.hpp"

namespace fusekit {

enum class EstimateKind { kPrior, kPosterior };

/// Filter belief at step k, tagged prior (before the measurement at k)
/// or posterior (after it). Fresh initial estimates are posteriors at k = 0.
struct FilterEstimate {
  Gaussian belief;
  EstimateKind kind = EstimateKind::kPosterior;
  int k = 0;
};

/// Innovation nu = z - H x_prior, its covariance S, and the normalized
/// innovation squared nu^T S^{-1} nu.
struct InnovationRecord {
  Vec nu;
  Mat s;
  double nis = 0.0;
};

struct InnovationSummary {
  Vec mean;
  Mat sample_cov;
  double mean_nis = 0.0;
};

/// Process update: x^- = F x + G u, P^- = F P F^T + L Q L^T.
FilterEstimate kf_predict(const FilterEstimate& est,
                          const DiscreteLinearModel& model, const Vec& u);

/// Measurement update with gain K = P^- H^T S^{-1} and Joseph-form
/// covariance; returns the posterior and the innovation record.
std::pair<FilterEstimate, InnovationRecord> kf_update(
    const FilterEstimate& est, const MeasurementModel& meas, const Vec& z);

/// Sample mean/covariance of the innovations and the mean NIS. For a
/// consistent filter the mean NIS is close to the measurement dimension.
InnovationSummary innovation_stats(std::span<const InnovationRecord> records);

/// Initial posterior from the first measurement: states selected by H are
/// set from z with the measurement variance; the rest start at 0 with
/// variance inflated by unobserved_inflation times the largest observed
/// variance. Requires H to be a 0/1 selector matrix.
FilterEstimate estimate_from_first_measurement(
    const MeasurementModel& meas, const Vec& z,
    double unobserved_inflation = 10.0);

}  // namespace fusekit
