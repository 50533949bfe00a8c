#ifndef GSO_COORDS_HPP
#define GSO_COORDS_HPP

#include <utility>
#include <vector>

#include "gso/geometry.hpp"

namespace gso {

struct SingularMetric : std::runtime_error {
  explicit SingularMetric(Eigen::Index index)
      : std::runtime_error("singular metric entry at index " + std::to_string(index)),
        index(index) {}
  Eigen::Index index;
};

/// Hyperspherical angles: theta_1..theta_{d-2} in [0, pi], the last in [0, 2*pi).
class AngleVector {
 public:
  explicit AngleVector(Vector angles);

  const Vector& angles() const { return angles_; }
  Eigen::Index size() const { return angles_.size(); }   // d - 1
  Eigen::Index dim() const { return angles_.size() + 1; }  // d

 private:
  Vector angles_;
};

AmplitudeState x_from_theta(const AngleVector& theta);

// Raw-angle overloads for the flat-space baselines, which iterate theta
// unconstrained; the trigonometric chart is well defined for any real angles.
AmplitudeState x_from_theta(const Vector& theta);
Vector metric_diag_raw(const Vector& theta);
Vector jacobian_apply(const Vector& theta, const Vector& w);
Vector jacobian_transpose_apply(const Vector& theta, const Vector& w);

/// Inverse chart. Zero tail norms resolve to theta_j = 0; the last angle
/// branches on the sign of x_d.
AngleVector theta_from_x(const AmplitudeState& x);

/// Diagonal of the pullback metric: g_11 = 1, g_jj = prod_{l<j} sin^2(theta_l).
class MetricDiagonal {
 public:
  explicit MetricDiagonal(Vector diag) : diag_(std::move(diag)) {}
  const Vector& diag() const { return diag_; }

 private:
  Vector diag_;
};

MetricDiagonal metric_diag(const AngleVector& theta);

/// J(theta) * w with one Jacobian row materialized at a time (O(d) space).
Vector jacobian_apply(const AngleVector& theta, const Vector& w);

/// J(theta)^T * w, same row-recursive scheme.
Vector jacobian_transpose_apply(const AngleVector& theta, const Vector& w);

/// Column l (0-based) of J(theta); nonzero only in components j >= l.
Vector jacobian_column(const AngleVector& theta, Eigen::Index l);

/// -J(theta) g^{-1}(theta) grad_theta, attached at x_from_theta(theta).
/// Throws SingularMetric on a zero metric entry.
TangentVector natural_gradient_x(const AngleVector& theta, const Vector& grad_theta);

/// Resets every angle j <= d-2 with |sin(theta_j)| <= tau to pi/2. The last
/// angle is never reset. Returns the new angles and the reset indices (0-based).
std::pair<AngleVector, std::vector<Eigen::Index>> regularize_singularities(
    const AngleVector& theta, double tau);

}  // namespace gso

#endif
