#include "fusekit/lsq.hpp"

#include <string>

namespace fusekit {

namespace {

void require_spd(const Mat& r, const char* who) {
  if (!matlib::is_symmetric(r, 1e-12)) {
    throw DomainError(std::string(who) + ": R is not symmetric");
  }
  if (!matlib::is_positive_definite(r)) {
    throw DomainError(std::string(who) + ": R is not positive definite");
  }
}

}  // namespace

Vec batch_ls(const Mat& h, const Vec& y) {
  if (y.size() != h.rows()) {
    throw ShapeError("batch_ls: y has size " + std::to_string(y.size()) +
                     ", expected " + std::to_string(h.rows()));
  }
  if (h.rows() < h.cols()) {
    throw UnderdeterminedError("batch_ls: " + std::to_string(h.rows()) +
                               " rows for " + std::to_string(h.cols()) +
                               " unknowns");
  }
  const Mat normal = h.transpose() * h;
  return matlib::invert(normal) * (h.transpose() * y);
}

std::pair<Vec, Mat> weighted_ls(const Mat& h, const Vec& y, const Mat& r) {
  if (y.size() != h.rows()) {
    throw ShapeError("weighted_ls: y has size " + std::to_string(y.size()) +
                     ", expected " + std::to_string(h.rows()));
  }
  if (r.rows() != h.rows() || r.cols() != h.rows()) {
    throw ShapeError("weighted_ls: R must be " + std::to_string(h.rows()) +
                     "x" + std::to_string(h.rows()));
  }
  require_spd(r, "weighted_ls");
  const Mat r_inv = matlib::invert(r);
  const Mat info = h.transpose() * r_inv * h;
  Mat cov = matlib::invert(info);
  Vec x_hat = cov * (h.transpose() * (r_inv * y));
  return {std::move(x_hat), std::move(cov)};
}

RlsState rls_init(const Vec& x0, const Mat& p0) {
  if (p0.rows() != x0.size() || p0.cols() != x0.size()) {
    throw ShapeError("rls_init: P0 must be " + std::to_string(x0.size()) +
                     "x" + std::to_string(x0.size()));
  }
  if (!matlib::is_symmetric(p0, 1e-9)) {
    throw DomainError("rls_init: P0 is not symmetric");
  }
  if (!matlib::is_positive_semidefinite(p0, 1e-9)) {
    throw DomainError("rls_init: P0 is not positive semidefinite");
  }
  return RlsState{x0, p0, 0};
}

RlsState rls_update(const RlsState& state, const Mat& h, const Vec& y,
                    const Mat& r) {
  const Eigen::Index n = state.x_hat.size();
  if (h.cols() != n) {
    throw ShapeError("rls_update: H has " + std::to_string(h.cols()) +
                     " cols, expected " + std::to_string(n));
  }
  if (y.size() != h.rows()) {
    throw ShapeError("rls_update: y has size " + std::to_string(y.size()) +
                     ", expected " + std::to_string(h.rows()));
  }
  require_spd(r, "rls_update");

  const Mat innovation_cov = h * state.p * h.transpose() + r;
  const Mat gain = state.p * h.transpose() * matlib::invert(innovation_cov);
  Vec x_hat = state.x_hat + gain * (y - h * state.x_hat);

  const Mat residual_map = Mat::Identity(n, n) - gain * h;
  Mat p = residual_map * state.p * residual_map.transpose() +
          gain * r * gain.transpose();
  p = matlib::symmetrize(p);
  return RlsState{std::move(x_hat), std::move(p), state.k + 1};
}

}  // namespace fusekit
