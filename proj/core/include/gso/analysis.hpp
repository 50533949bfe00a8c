#ifndef GSO_ANALYSIS_HPP
#define GSO_ANALYSIS_HPP

#include <cstdint>
#include <random>

#include "gso/geometry.hpp"
#include "gso/hamiltonian.hpp"

namespace gso {

struct ClosedFormVariances {
  double var_loss = 0.0;
  Vector var_grad;  // per component of the Riemannian gradient
};

/// Exact landscape variances over the uniform sphere measure:
/// Var[L] = (d tr(H^2) - tr(H)^2) / (d^2 (d+2) / 2), and the per-component
/// gradient variance from the fourth/sixth moment formulas.
ClosedFormVariances closed_form_variances(const SubspaceHamiltonian& H);

/// Normalized standard-normal vector: uniform on S^{d-1}.
AmplitudeState sample_uniform_sphere(Eigen::Index d, std::mt19937_64& rng);

struct VarianceReport {
  double closed_form_var_loss = 0.0;
  Vector closed_form_var_grad;
  double mc_var_loss = 0.0;
  double mc_var_loss_se = 0.0;
  Vector mc_var_grad;
  Vector mc_var_grad_se;
  std::uint64_t samples = 0;
};

/// Monte Carlo estimates of the same variances with delta-method standard
/// errors from the fourth central moment.
VarianceReport mc_variances(const SubspaceHamiltonian& H, std::uint64_t samples,
                            std::mt19937_64& rng);

/// Max-norm deviation between exp(eta W) x with W = 2(H x x^T - x x^T H) and
/// the geodesic point cos(eta |dL|) x + sin(eta |dL|) dL/|dL|.
double qite_equivalence_check(const AmplitudeState& x, const SubspaceHamiltonian& H, double eta);

}  // namespace gso

#endif
