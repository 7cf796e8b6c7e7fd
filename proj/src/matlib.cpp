#include "fusekit/matlib.hpp"

#include <cmath>
#include <string>

namespace fusekit::matlib {

namespace {

std::string shape_of(const Mat& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_finite(const Mat& m, const char* op) {
  if (!m.allFinite()) {
    throw DomainError(std::string(op) + " produced a non-finite entry");
  }
}

}  // namespace

Mat multiply(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("multiply: inner dimensions differ, " + shape_of(a) +
                     " x " + shape_of(b));
  }
  Mat result = a * b;
  require_finite(result, "multiply");
  return result;
}

Mat invert(const Mat& m, double pivot_tol) {
  if (m.rows() != m.cols()) {
    throw ShapeError("invert: matrix is not square, " + shape_of(m));
  }
  const Eigen::Index n = m.rows();
  Mat work = m;
  Mat inverse = Mat::Identity(n, n);

  for (Eigen::Index col = 0; col < n; ++col) {
    // Partial pivoting: largest magnitude in the remaining column.
    Eigen::Index pivot_row = col;
    double pivot_mag = std::abs(work(col, col));
    for (Eigen::Index row = col + 1; row < n; ++row) {
      if (std::abs(work(row, col)) > pivot_mag) {
        pivot_mag = std::abs(work(row, col));
        pivot_row = row;
      }
    }
    if (pivot_mag < pivot_tol) {
      throw SingularMatrixError(
          "invert: pivot " + std::to_string(pivot_mag) + " below tolerance " +
          std::to_string(pivot_tol) + " at column " + std::to_string(col));
    }
    if (pivot_row != col) {
      work.row(col).swap(work.row(pivot_row));
      inverse.row(col).swap(inverse.row(pivot_row));
    }

    const double pivot = work(col, col);
    work.row(col) /= pivot;
    inverse.row(col) /= pivot;
    for (Eigen::Index row = 0; row < n; ++row) {
      if (row == col) continue;
      const double factor = work(row, col);
      if (factor != 0.0) {
        work.row(row) -= factor * work.row(col);
        inverse.row(row) -= factor * inverse.row(col);
      }
    }
  }
  require_finite(inverse, "invert");
  return inverse;
}

Mat matrix_exponential(const Mat& a, double t, double term_tol,
                       int max_terms) {
  if (a.rows() != a.cols()) {
    throw ShapeError("matrix_exponential: matrix is not square, " +
                     shape_of(a));
  }
  if (!std::isfinite(t)) {
    throw DomainError("matrix_exponential: t is not finite");
  }
  const Eigen::Index n = a.rows();
  Mat scaled = a * t;
  if (scaled.cwiseAbs().maxCoeff() == 0.0) {
    return Mat::Identity(n, n);
  }

  // Halve At until its max-abs norm is <= 0.5, square back afterwards.
  int squarings = 0;
  while (scaled.cwiseAbs().maxCoeff() > 0.5) {
    scaled *= 0.5;
    ++squarings;
  }

  Mat sum = Mat::Identity(n, n) + scaled;
  Mat term = scaled;
  bool converged = false;
  for (int j = 2; j <= max_terms; ++j) {
    term = (term * scaled) / static_cast<double>(j);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < term_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("matrix_exponential: series did not converge in " +
                           std::to_string(max_terms) + " terms");
  }
  for (int s = 0; s < squarings; ++s) {
    sum = sum * sum;
  }
  require_finite(sum, "matrix_exponential");
  return sum;
}

Mat first_order_transition(const Mat& a, double t) {
  if (a.rows() != a.cols()) {
    throw ShapeError("first_order_transition: matrix is not square, " +
                     shape_of(a));
  }
  if (!std::isfinite(t)) {
    throw DomainError("first_order_transition: t is not finite");
  }
  return Mat::Identity(a.rows(), a.cols()) + a * t;
}

bool is_symmetric(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool is_positive_semidefinite(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Eigen::SelfAdjointEigenSolver<Mat> solver(m);
  if (solver.info() != Eigen::Success) return false;
  return solver.eigenvalues().minCoeff() >= -tol;
}

bool is_positive_definite(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Eigen::SelfAdjointEigenSolver<Mat> solver(m);
  if (solver.info() != Eigen::Success) return false;
  return solver.eigenvalues().minCoeff() > tol;
}

}  // namespace fusekit::matlib
