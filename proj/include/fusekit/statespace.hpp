#pragma once

#include <utility>

#include "fusekit/matlib.hpp"

namespace fusekit {

/// Continuous-time linear dynamics xdot = A x + B u.
struct ContinuousLinearModel {
  Mat a;  // n x n, units 1/s
  Mat b;  // n x m

  ContinuousLinearModel(Mat a_in, Mat b_in);

  Eigen::Index state_dim() const { return a.rows(); }
  Eigen::Index input_dim() const { return b.cols(); }
};

/// Discrete-time linear dynamics x_k = F x_{k-1} + G u_{k-1} + L w_{k-1},
/// with w ~ N(0, Q).
struct DiscreteLinearModel {
  Mat f;      // n x n state transition
  Mat g;      // n x m control input
  Mat l;      // n x p process-noise input
  Mat q;      // p x p process-noise covariance, PSD
  double dt;  // seconds, > 0

  DiscreteLinearModel(Mat f_in, Mat g_in, Mat l_in, Mat q_in, double dt_in);

  Eigen::Index state_dim() const { return f.rows(); }
  Eigen::Index input_dim() const { return g.cols(); }
  Eigen::Index noise_dim() const { return l.cols(); }
};

/// Linear measurement z = H x + M v, with v ~ N(0, R).
struct MeasurementModel {
  Mat h;  // d x n observation matrix
  Mat m;  // d x q measurement-noise input
  Mat r;  // q x q measurement-noise covariance, SPD

  MeasurementModel(Mat h_in, Mat m_in, Mat r_in);

  /// Convenience for additive noise: M = I, R given directly.
  MeasurementModel(Mat h_in, Mat r_in);

  Eigen::Index meas_dim() const { return h.rows(); }
  Eigen::Index state_dim() const { return h.cols(); }

  /// Effective additive measurement covariance M R M^T.
  Mat effective_noise_cov() const { return m * r * m.transpose(); }
};

/// Mean/covariance belief pair.
struct Gaussian {
  Vec mean;
  Mat cov;

  Gaussian(Vec mean_in, Mat cov_in);

  Eigen::Index dim() const { return mean.size(); }
};

/// Zero-order-hold discretization of a continuous model over step dt:
/// F = e^{A dt}, G = (integral_0^dt e^{Av} dv) B. The integral is summed
/// term-by-term (sum_j A^j dt^{j+1}/(j+1)!), which also covers singular A.
std::pair<Mat, Mat> discretize(const ContinuousLinearModel& model, double dt);

/// One step of the discrete process model: F x + G u + L w.
Vec step_discrete(const DiscreteLinearModel& model, const Vec& x, const Vec& u,
                  const Vec& w);

/// One measurement draw: H x + M v.
Vec measure(const MeasurementModel& model, const Vec& x, const Vec& v);

}  // namespace fusekit
