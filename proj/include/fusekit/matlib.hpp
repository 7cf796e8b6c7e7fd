#pragma once

#include <Eigen/Dense>

#include "fusekit/errors.hpp"

namespace fusekit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace matlib {

/// Pivot magnitudes below this during elimination count as singular.
inline constexpr double kPivotTolerance = 1e-12;
/// A power-series term with max-abs below this terminates the series.
inline constexpr double kSeriesTermTolerance = 1e-14;
/// Hard cap on series terms before reporting non-convergence.
inline constexpr int kMaxSeriesTerms = 64;

/// Checked matrix product; throws ShapeError naming both shapes on
/// mismatched inner dimensions.
Mat multiply(const Mat& a, const Mat& b);

/// Inverse by Gauss-Jordan elimination with partial pivoting.
/// Throws SingularMatrixError when a pivot falls below pivot_tol.
Mat invert(const Mat& m, double pivot_tol = kPivotTolerance);

/// e^{At} by power series with scaling-and-squaring: At is halved until
/// its max-abs norm is <= 0.5, the series is summed to term_tol, and the
/// result squared back up.
Mat matrix_exponential(const Mat& a, double t,
                       double term_tol = kSeriesTermTolerance,
                       int max_terms = kMaxSeriesTerms);

/// First-order truncation I + At. Cheap, valid only for small ||At||.
Mat first_order_transition(const Mat& a, double t);

/// Symmetric part (m + m^T)/2; used to scrub covariance roundoff drift.
inline Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

/// True when m is symmetric to within tol (max-abs of m - m^T).
bool is_symmetric(const Mat& m, double tol);

/// True when symmetric m has all eigenvalues >= -tol.
bool is_positive_semidefinite(const Mat& m, double tol);

/// True when symmetric m has all eigenvalues > tol.
bool is_positive_definite(const Mat& m, double tol = 0.0);

}  // namespace matlib
}  // namespace fusekit
