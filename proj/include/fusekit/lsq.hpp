#pragma once

#include <utility>

#include "fusekit/matlib.hpp"

namespace fusekit {

/// Recursive least-squares estimator state: estimate, covariance, step count.
struct RlsState {
  Vec x_hat;
  Mat p;
  int k = 0;
};

/// Ordinary least squares through the normal equations:
/// x_hat = (H^T H)^{-1} H^T y.
Vec batch_ls(const Mat& h, const Vec& y);

/// Weighted least squares: x_hat = (H^T R^{-1} H)^{-1} H^T R^{-1} y,
/// with the estimate covariance (H^T R^{-1} H)^{-1} returned alongside.
std::pair<Vec, Mat> weighted_ls(const Mat& h, const Vec& y, const Mat& r);

/// Initial estimator state from a prior guess and its covariance.
RlsState rls_init(const Vec& x0, const Mat& p0);

/// One recursive update with measurement block y = H x + v, v ~ N(0, R).
/// Gain K = P H^T (H P H^T + R)^{-1}; covariance via the Joseph form
/// (I - KH) P (I - KH)^T + K R K^T, re-symmetrized.
RlsState rls_update(const RlsState& state, const Mat& h, const Vec& y,
                    const Mat& r);

}  // namespace fusekit
