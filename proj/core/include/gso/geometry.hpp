#ifndef GSO_GEOMETRY_HPP
#define GSO_GEOMETRY_HPP

#include <Eigen/Dense>
#include <stdexcept>

namespace gso {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Tolerances for the state/tangent invariants. All geometry routines keep
/// their outputs inside these bands.
inline constexpr double kNormTol = 1e-12;
inline constexpr double kOrthoTol = 1e-10;

/// Unit l2-normalized real amplitude vector on S^{d-1}.
class AmplitudeState {
 public:
  explicit AmplitudeState(Vector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 1) throw std::invalid_argument("AmplitudeState: empty vector");
    const double n = coords_.norm();
    if (std::abs(n - 1.0) > kNormTol)
      throw std::invalid_argument("AmplitudeState: vector is not unit-norm");
  }

  /// Normalizes before constructing. Throws on a (near-)zero vector.
  static AmplitudeState normalized(Vector raw) {
    const double n = raw.norm();
    if (n < 1e-300) throw std::invalid_argument("AmplitudeState: zero vector");
    return AmplitudeState(raw / n);
  }

  const Vector& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }

 private:
  Vector coords_;
};

/// Real d-vector attached to a base point, orthogonal to it.
class TangentVector {
 public:
  TangentVector(AmplitudeState base, Vector components)
      : base_(std::move(base)), components_(std::move(components)) {
    if (components_.size() != base_.dim())
      throw std::invalid_argument("TangentVector: dimension mismatch");
    const double ip = base_.coords().dot(components_);
    if (std::abs(ip) > kOrthoTol * std::max(1.0, components_.norm()))
      throw std::invalid_argument("TangentVector: not orthogonal to base");
  }

  const AmplitudeState& base() const { return base_; }
  const Vector& components() const { return components_; }
  double norm() const { return components_.norm(); }

 private:
  AmplitudeState base_;
  Vector components_;
};

class SubspaceHamiltonian;

/// Pi_x w = w - <x,w> x, the orthogonal projection onto T_x S^{d-1}.
TangentVector project_tangent(const AmplitudeState& x, const Vector& w);

/// Riemannian gradient of the Rayleigh quotient: 2(H - x^T H x) x.
TangentVector riemannian_grad(const AmplitudeState& x, const SubspaceHamiltonian& H);

/// Geodesic endpoint cos(eta|v|) x + sin(eta|v|) v/|v|. |v| = 0 returns x.
AmplitudeState exp_map(const AmplitudeState& x, const TangentVector& v, double eta);

/// Parallel transport of zeta along the geodesic exp_map(x, v, .), attached
/// at the transported base point. |v| = 0 re-attaches zeta at x.
TangentVector parallel_transport(const AmplitudeState& x, const TangentVector& v,
                                 const TangentVector& zeta, double eta);

}  // namespace gso

#endif
