#ifndef GSO_GRADIENTS_HPP
#define GSO_GRADIENTS_HPP

#include <cstdint>

#include "gso/coords.hpp"
#include "gso/geometry.hpp"
#include "gso/hamiltonian.hpp"

namespace gso {

/// Per-run resource accounting. psr_equivalent_calls is the cost the standard
/// parameter-shift rule would charge for the same gradients (4M per full one).
struct CallCounters {
  std::uint64_t loss_calls = 0;
  std::uint64_t gradient_calls = 0;
  std::uint64_t psr_equivalent_calls = 0;
};

/// x^T H x. Counts one loss call when counters are supplied.
double loss(const AmplitudeState& x, const SubspaceHamiltonian& H,
            CallCounters* counters = nullptr);

/// Euclidean gradient 2(H - L(x)) x.
Vector grad_x(const AmplitudeState& x, const SubspaceHamiltonian& H);

/// J^T(theta) grad_x via the structured transpose product.
Vector grad_theta_chain(const AngleVector& theta, const SubspaceHamiltonian& H);
Vector grad_theta_chain(const Vector& theta, const SubspaceHamiltonian& H);

/// Gradient from three loss evaluations per component:
/// g_ll^{1/2} (2 L_phi - L_varphi - L_psi), with L_psi evaluated once.
/// Charges 2(d-1)+1 loss calls and 4(d-1) PSR-equivalent calls.
Vector grad_theta_structured(const AngleVector& theta, const SubspaceHamiltonian& H,
                             CallCounters& counters);

/// Central finite differences of loss(x_from_theta(.)).
Vector fd_gradient_oracle(const AngleVector& theta, const SubspaceHamiltonian& H, double step);

/// Cost of the structured gradient relative to the 4M parameter-shift rule:
/// (3/2)(M+1) time units against 4M, i.e. 3(M+1)/(8M) -> 3/8 as M grows.
constexpr double psr_cost_ratio(int m) {
  return 3.0 * (m + 1) / (8.0 * m);
}

}  // namespace gso

#endif
