#include "fusekit/statespace.hpp"

#include <cmath>
#include <string>

namespace fusekit {

namespace {

std::string shape_of(const Mat& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_symmetric(const Mat& m, double tol, const char* name) {
  if (!matlib::is_symmetric(m, tol)) {
    throw DomainError(std::string(name) + " is not symmetric within " +
                      std::to_string(tol));
  }
}

}  // namespace

ContinuousLinearModel::ContinuousLinearModel(Mat a_in, Mat b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  if (a.rows() != a.cols()) {
    throw ShapeError("ContinuousLinearModel: A is not square, " + shape_of(a));
  }
  if (b.rows() != a.rows()) {
    throw ShapeError("ContinuousLinearModel: B has " +
                     std::to_string(b.rows()) + " rows, expected " +
                     std::to_string(a.rows()));
  }
}

DiscreteLinearModel::DiscreteLinearModel(Mat f_in, Mat g_in, Mat l_in,
                                         Mat q_in, double dt_in)
    : f(std::move(f_in)),
      g(std::move(g_in)),
      l(std::move(l_in)),
      q(std::move(q_in)),
      dt(dt_in) {
  if (f.rows() != f.cols()) {
    throw ShapeError("DiscreteLinearModel: F is not square, " + shape_of(f));
  }
  if (g.rows() != f.rows() || l.rows() != f.rows()) {
    throw ShapeError("DiscreteLinearModel: G/L row counts must match F");
  }
  if (q.rows() != l.cols() || q.cols() != l.cols()) {
    throw ShapeError("DiscreteLinearModel: Q must be " +
                     std::to_string(l.cols()) + "x" + std::to_string(l.cols()) +
                     ", got " + shape_of(q));
  }
  if (!(dt > 0.0)) {
    throw DomainError("DiscreteLinearModel: dt must be > 0");
  }
  require_symmetric(q, 1e-12, "Q");
  if (!matlib::is_positive_semidefinite(q, 1e-12)) {
    throw DomainError("Q is not positive semidefinite");
  }
}

MeasurementModel::MeasurementModel(Mat h_in, Mat m_in, Mat r_in)
    : h(std::move(h_in)), m(std::move(m_in)), r(std::move(r_in)) {
  if (m.rows() != h.rows()) {
    throw ShapeError("MeasurementModel: M has " + std::to_string(m.rows()) +
                     " rows, expected " + std::to_string(h.rows()));
  }
  if (r.rows() != m.cols() || r.cols() != m.cols()) {
    throw ShapeError("MeasurementModel: R must be " + std::to_string(m.cols()) +
                     "x" + std::to_string(m.cols()) + ", got " + shape_of(r));
  }
  require_symmetric(r, 1e-12, "R");
  if (!matlib::is_positive_definite(r)) {
    throw DomainError("R is not positive definite");
  }
}

MeasurementModel::MeasurementModel(Mat h_in, Mat r_in)
    : MeasurementModel(h_in, Mat::Identity(h_in.rows(), h_in.rows()),
                       std::move(r_in)) {}

Gaussian::Gaussian(Vec mean_in, Mat cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
    throw ShapeError("Gaussian: cov must be " + std::to_string(mean.size()) +
                     "x" + std::to_string(mean.size()) + ", got " +
                     shape_of(cov));
  }
  if (!matlib::is_symmetric(cov, 1e-9)) {
    throw DomainError("Gaussian: cov is not symmetric within 1e-9");
  }
  if (!matlib::is_positive_semidefinite(cov, 1e-9)) {
    throw DomainError("Gaussian: cov is not positive semidefinite");
  }
}

std::pair<Mat, Mat> discretize(const ContinuousLinearModel& model, double dt) {
  if (!(dt > 0.0)) {
    throw DomainError("discretize: dt must be > 0");
  }
  const Eigen::Index n = model.state_dim();
  Mat f = matlib::matrix_exponential(model.a, dt);

  // integral_0^dt e^{Av} dv = sum_{j>=0} A^j dt^{j+1}/(j+1)!
  Mat integral = Mat::Identity(n, n) * dt;
  Mat term = integral;
  for (int j = 1; j <= 2 * matlib::kMaxSeriesTerms; ++j) {
    term = (model.a * term) * (dt / static_cast<double>(j + 1));
    integral += term;
    if (term.cwiseAbs().maxCoeff() < matlib::kSeriesTermTolerance) break;
  }
  Mat g = integral * model.b;
  return {std::move(f), std::move(g)};
}

Vec step_discrete(const DiscreteLinearModel& model, const Vec& x, const Vec& u,
                  const Vec& w) {
  if (x.size() != model.state_dim()) {
    throw ShapeError("step_discrete: x has size " + std::to_string(x.size()) +
                     ", expected " + std::to_string(model.state_dim()));
  }
  if (u.size() != model.input_dim()) {
    throw ShapeError("step_discrete: u has size " + std::to_string(u.size()) +
                     ", expected " + std::to_string(model.input_dim()));
  }
  if (w.size() != model.noise_dim()) {
    throw ShapeError("step_discrete: w has size " + std::to_string(w.size()) +
                     ", expected " + std::to_string(model.noise_dim()));
  }
  return model.f * x + model.g * u + model.l * w;
}

Vec measure(const MeasurementModel& model, const Vec& x, const Vec& v) {
  if (x.size() != model.state_dim()) {
    throw ShapeError("measure: x has size " + std::to_string(x.size()) +
                     ", expected " + std::to_string(model.state_dim()));
  }
  if (v.size() != model.m.cols()) {
    throw ShapeError("measure: v has size " + std::to_string(v.size()) +
                     ", expected " + std::to_string(model.m.cols()));
  }
  return model.h * x + model.m * v;
}

}  // namespace fusekit
