#include "gso/geometry.hpp"

#include <cmath>

#include "gso/hamiltonian.hpp"

namespace gso {

TangentVector project_tangent(const AmplitudeState& x, const Vector& w) {
  if (w.size() != x.dim()) throw std::invalid_argument("project_tangent: dimension mismatch");
  Vector out = w - x.coords().dot(w) * x.coords();
  return TangentVector(x, std::move(out));
}

TangentVector riemannian_grad(const AmplitudeState& x, const SubspaceHamiltonian& H) {
  if (H.dim() != x.dim()) throw std::invalid_argument("riemannian_grad: dimension mismatch");
  Vector hx = H.apply(x.coords());
  const double l = x.coords().dot(hx);
  return project_tangent(x, 2.0 * (hx - l * x.coords()));
}

AmplitudeState exp_map(const AmplitudeState& x, const TangentVector& v, double eta) {
  if (eta < 0.0) throw std::invalid_argument("exp_map: eta must be >= 0");
  const double nv = v.norm();
  const double a = eta * nv;
  if (a == 0.0) return x;
  Vector out = std::cos(a) * x.coords() + (std::sin(a) / nv) * v.components();
  return AmplitudeState(std::move(out));
}

TangentVector parallel_transport(const AmplitudeState& x, const TangentVector& v,
                                 const TangentVector& zeta, double eta) {
  const double nv = v.norm();
  if (nv == 0.0) return TangentVector(x, zeta.components());
  const double a = eta * nv;
  const double ip = v.components().dot(zeta.components());
  Vector out = zeta.components() - std::sin(a) * (ip / nv) * x.coords() +
               (std::cos(a) - 1.0) * (ip / (nv * nv)) * v.components();
  AmplitudeState base = exp_map(x, v, eta);
  // Re-project onto the new tangent plane to suppress roundoff drift.
  return project_tangent(base, out);
}

}  // namespace gso
