#include "gso/coords.hpp"

#include <cmath>
#include <numbers>

namespace gso {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double clamp_unit(double t) { return std::min(1.0, std::max(-1.0, t)); }

}  // namespace

AngleVector::AngleVector(Vector angles) : angles_(std::move(angles)) {
  if (angles_.size() < 1) throw std::invalid_argument("AngleVector: need at least one angle");
  const Eigen::Index m = angles_.size();
  for (Eigen::Index j = 0; j + 1 < m; ++j) {
    double a = angles_[j];
    if (a < -1e-12 || a > kPi + 1e-12)
      throw std::invalid_argument("AngleVector: angle out of [0, pi]");
    angles_[j] = std::min(kPi, std::max(0.0, a));
  }
  double last = std::fmod(angles_[m - 1], kTwoPi);
  if (last < 0.0) last += kTwoPi;
  if (last == kTwoPi) last = 0.0;
  angles_[m - 1] = last;
}

AmplitudeState x_from_theta(const Vector& theta) {
  const Eigen::Index m = theta.size();
  Vector x(m + 1);
  double sin_prod = 1.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    x[j] = std::cos(theta[j]) * sin_prod;
    sin_prod *= std::sin(theta[j]);
  }
  x[m] = sin_prod;
  return AmplitudeState::normalized(std::move(x));
}

AmplitudeState x_from_theta(const AngleVector& theta) { return x_from_theta(theta.angles()); }

AngleVector theta_from_x(const AmplitudeState& x) {
  const Eigen::Index d = x.dim();
  if (d < 2) throw std::invalid_argument("theta_from_x: need d >= 2");
  const Vector& c = x.coords();
  // Tail norms r_j = ||(x_j, ..., x_d)||, accumulated backward for stability.
  Vector r(d);
  double acc = 0.0;
  for (Eigen::Index j = d - 1; j >= 0; --j) {
    acc += c[j] * c[j];
    r[j] = std::sqrt(acc);
  }
  Vector theta(d - 1);
  for (Eigen::Index j = 0; j + 1 < d - 1; ++j) {
    theta[j] = (r[j] == 0.0) ? 0.0 : std::acos(clamp_unit(c[j] / r[j]));
  }
  const Eigen::Index last = d - 2;
  if (r[last] == 0.0) {
    theta[last] = 0.0;
  } else {
    const double t = std::acos(clamp_unit(c[last] / r[last]));
    theta[last] = (c[d - 1] >= 0.0) ? t : kTwoPi - t;
  }
  return AngleVector(std::move(theta));
}

Vector metric_diag_raw(const Vector& theta) {
  const Eigen::Index m = theta.size();
  Vector g(m);
  g[0] = 1.0;
  for (Eigen::Index j = 1; j < m; ++j) {
    const double s = std::sin(theta[j - 1]);
    g[j] = g[j - 1] * s * s;
  }
  return g;
}

MetricDiagonal metric_diag(const AngleVector& theta) {
  return MetricDiagonal(metric_diag_raw(theta.angles()));
}

// Row-recursive Jacobian products. One row of J is kept at a time:
// u[l] = cos(theta_l) prod_{k<j, k!=l} sin(theta_k) for l < j, updated by a
// single sine multiply per row, so auxiliary storage stays O(d).
Vector jacobian_apply(const Vector& theta, const Vector& w) {
  const Eigen::Index m = theta.size();
  if (w.size() != m) throw std::invalid_argument("jacobian_apply: dimension mismatch");
  Vector y(m + 1);
  double sin_prod = 1.0;  // prod_{k<j} sin(theta_k)
  double partial = 0.0;   // sum_{l<j} u[l] w[l] for the running row entries u
  for (Eigen::Index j = 0; j < m; ++j) {
    const double c = std::cos(theta[j]);
    const double s = std::sin(theta[j]);
    y[j] = c * partial - sin_prod * s * w[j];
    partial = partial * s + c * sin_prod * w[j];
    sin_prod *= s;
  }
  y[m] = partial;
  return y;
}

Vector jacobian_apply(const AngleVector& theta, const Vector& w) {
  return jacobian_apply(theta.angles(), w);
}

Vector jacobian_transpose_apply(const Vector& theta, const Vector& w) {
  const Eigen::Index m = theta.size();
  if (w.size() != m + 1) throw std::invalid_argument("jacobian_transpose_apply: dimension mismatch");
  Vector out = Vector::Zero(m);
  Vector u = Vector::Zero(m);
  double sin_prod = 1.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double c = std::cos(theta[j]);
    const double s = std::sin(theta[j]);
    for (Eigen::Index l = 0; l < j; ++l) out[l] += u[l] * c * w[j];
    out[j] += -sin_prod * s * w[j];
    for (Eigen::Index l = 0; l < j; ++l) u[l] *= s;
    u[j] = c * sin_prod;
    sin_prod *= s;
  }
  for (Eigen::Index l = 0; l < m; ++l) out[l] += u[l] * w[m];
  return out;
}

Vector jacobian_transpose_apply(const AngleVector& theta, const Vector& w) {
  return jacobian_transpose_apply(theta.angles(), w);
}

Vector jacobian_column(const AngleVector& theta, Eigen::Index l) {
  const Vector& a = theta.angles();
  const Eigen::Index m = a.size();
  if (l < 0 || l >= m) throw std::invalid_argument("jacobian_column: index out of range");
  Vector col = Vector::Zero(m + 1);
  double prefix = 1.0;  // prod_{k<l} sin(theta_k)
  for (Eigen::Index k = 0; k < l; ++k) prefix *= std::sin(a[k]);
  col[l] = -prefix * std::sin(a[l]);
  double run = prefix * std::cos(a[l]);  // cos(theta_l) prod_{k<j, k!=l} sin(theta_k)
  for (Eigen::Index j = l + 1; j < m; ++j) {
    col[j] = run * std::cos(a[j]);
    run *= std::sin(a[j]);
  }
  col[m] = run;
  return col;
}

TangentVector natural_gradient_x(const AngleVector& theta, const Vector& grad_theta) {
  const Eigen::Index m = theta.size();
  if (grad_theta.size() != m)
    throw std::invalid_argument("natural_gradient_x: dimension mismatch");
  const Vector g = metric_diag_raw(theta.angles());
  for (Eigen::Index j = 0; j < m; ++j) {
    if (g[j] == 0.0) throw SingularMetric(j);
  }
  Vector scaled = grad_theta.cwiseQuotient(g);
  Vector v = -jacobian_apply(theta.angles(), scaled);
  AmplitudeState x = x_from_theta(theta);
  return project_tangent(x, v);
}

std::pair<AngleVector, std::vector<Eigen::Index>> regularize_singularities(
    const AngleVector& theta, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("regularize_singularities: tau must be > 0");
  Vector a = theta.angles();
  std::vector<Eigen::Index> reset;
  for (Eigen::Index j = 0; j + 1 < a.size(); ++j) {
    if (std::abs(std::sin(a[j])) <= tau) {
      a[j] = kPi / 2.0;
      reset.push_back(j);
    }
  }
  return {AngleVector(std::move(a)), std::move(reset)};
}

}  // namespace gso
