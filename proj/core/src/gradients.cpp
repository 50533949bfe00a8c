#include "gso/gradients.hpp"

#include <cmath>

namespace gso {

double loss(const AmplitudeState& x, const SubspaceHamiltonian& H, CallCounters* counters) {
  if (x.dim() != H.dim()) throw std::invalid_argument("loss: dimension mismatch");
  if (counters) ++counters->loss_calls;
  return x.coords().dot(H.apply(x.coords()));
}

Vector grad_x(const AmplitudeState& x, const SubspaceHamiltonian& H) {
  Vector hx = H.apply(x.coords());
  const double l = x.coords().dot(hx);
  return 2.0 * (hx - l * x.coords());
}

Vector grad_theta_chain(const Vector& theta, const SubspaceHamiltonian& H) {
  const AmplitudeState x = x_from_theta(theta);
  return jacobian_transpose_apply(theta, grad_x(x, H));
}

Vector grad_theta_chain(const AngleVector& theta, const SubspaceHamiltonian& H) {
  return grad_theta_chain(theta.angles(), H);
}

Vector grad_theta_structured(const AngleVector& theta, const SubspaceHamiltonian& H,
                             CallCounters& counters) {
  const Eigen::Index m = theta.size();
  const Vector g = metric_diag_raw(theta.angles());
  for (Eigen::Index l = 0; l < m; ++l) {
    if (g[l] <= 0.0) throw SingularMetric(l);
  }
  const AmplitudeState psi = x_from_theta(theta);
  const double l_psi = loss(psi, H, &counters);
  Vector out(m);
  for (Eigen::Index l = 0; l < m; ++l) {
    const double gl = std::sqrt(g[l]);
    // |varphi_l> = g_ll^{-1/2} |d_theta_l psi>: unit norm, supported on j >= l.
    const AmplitudeState varphi = AmplitudeState::normalized(jacobian_column(theta, l) / gl);
    const AmplitudeState phi =
        AmplitudeState::normalized((psi.coords() + varphi.coords()) / std::sqrt(2.0));
    const double l_phi = loss(phi, H, &counters);
    const double l_varphi = loss(varphi, H, &counters);
    out[l] = gl * (2.0 * l_phi - l_varphi - l_psi);
  }
  counters.psr_equivalent_calls += 4 * static_cast<std::uint64_t>(m);
  return out;
}

Vector fd_gradient_oracle(const AngleVector& theta, const SubspaceHamiltonian& H, double step) {
  if (step <= 0.0) throw std::invalid_argument("fd_gradient_oracle: step must be > 0");
  const Eigen::Index m = theta.size();
  Vector out(m);
  Vector a = theta.angles();
  for (Eigen::Index l = 0; l < m; ++l) {
    const double saved = a[l];
    a[l] = saved + step;
    const double lp = loss(x_from_theta(a), H);
    a[l] = saved - step;
    const double lm = loss(x_from_theta(a), H);
    a[l] = saved;
    out[l] = (lp - lm) / (2.0 * step);
  }
  return out;
}

}  // namespace gso
