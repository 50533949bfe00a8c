#ifndef GSO_OPTIMIZE_HPP
#define GSO_OPTIMIZE_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gso/coords.hpp"
#include "gso/geometry.hpp"
#include "gso/gradients.hpp"
#include "gso/hamiltonian.hpp"

namespace gso {

struct LineSearchFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CGParams {
  double c1 = 0.485;  // sufficient decrease
  double c2 = 0.999;  // curvature
  double c3 = 1.0;    // power-method scale
  double epsilon = 1e-24;  // residual tolerance
  int max_epochs = 1000;
  int max_backtracks = 40;
  double tau = 1e-3;       // singularity threshold
  double eta_floor = 1e-16;
  bool molecule_mode = false;   // line-search start max(eta_PM, pi/(4|u|))
  bool golden_section = false;  // golden-section bracketing before backtracking
  double chem_acc = 1.6e-3;
  bool chem_mode_rel = false;  // false: |E-E0| <= chem_acc; true: relative
  int halt_after_acc = 15;     // extra epochs after chemical accuracy
  double early_stop_delta = 1e-4;
  int early_stop_flat = 20;  // consecutive epochs of tiny decrease
  int early_stop_rise = 10;  // consecutive epochs of increase
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

struct OptimizerState {
  AmplitudeState x;
  AngleVector theta;
  TangentVector v;  // negative natural gradient (descent direction)
  TangentVector u;  // search direction
  double eta_prev = 0.0;
  int epoch = 0;
  CallCounters counters;
};

OptimizerState make_optimizer_state(const AmplitudeState& x0, const SubspaceHamiltonian& H);

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double abs_error = std::numeric_limits<double>::quiet_NaN();
  double rel_error = std::numeric_limits<double>::quiet_NaN();
  double grad_norm = 0.0;
  double eta = 0.0;
  double beta = 0.0;
  int backtracks = 0;
  std::vector<Eigen::Index> resets;
  std::uint64_t loss_calls = 0;      // cumulative
  std::uint64_t gradient_calls = 0;  // cumulative
};

struct RunTrace {
  std::vector<EpochRecord> records;
  double e0 = std::numeric_limits<double>::quiet_NaN();
  std::optional<int> epochs_to_chem_acc;
  std::string stop_reason;
  CallCounters counters;
  Vector final_x;
  double final_loss = std::numeric_limits<double>::quiet_NaN();
};

/// One exact-geodesic step along the current v; recomputes v at the new point.
OptimizerState egt_step(const OptimizerState& state, const SubspaceHamiltonian& H, double eta);

struct TransportResult {
  TangentVector transported;  // at exp_map(x, u, eta)
  double s = 1.0;
};

/// Transports u along its own geodesic step and reports the isometry scale
/// s = min{1, |u| / |T(u)|}.
TransportResult vector_transport_scaled(const OptimizerState& state, double eta);

/// Hybrid Dai-Yuan / Hestenes-Stiefel beta: max{0, min{DY, HS}}.
double beta_hybrid(const Vector& v_new, const Vector& v_old, const Vector& u_old,
                   const Vector& transported_u, const Vector& transported_negv,
                   double s_t, double l_t);

struct WolfeResult {
  double eta = 0.0;
  int backtracks = 0;
};

/// Backtracking (optionally golden-section seeded) search for a step
/// satisfying both transported strong Wolfe conditions along u.
WolfeResult wolfe_line_search(OptimizerState& state, const SubspaceHamiltonian& H,
                              const TangentVector& u, const CGParams& params);

/// Full EGT-CG loop (residual stop, Wolfe steps, hybrid beta, scaled
/// transport, singularity resets between epochs). use_cg = false forces
/// beta = 0, giving plain EGT with the same line search.
RunTrace egt_cg_run(const SubspaceHamiltonian& H, const AmplitudeState& x0,
                    const CGParams& params, double e0, bool use_cg = true);

/// QNG baseline step. order 1: theta' = theta - eta g^{-1} grad_theta.
/// order 2: second-order Taylor of the exponential map, renormalized.
OptimizerState qng_step(const OptimizerState& state, const SubspaceHamiltonian& H, double eta,
                        int order);

/// QNG baseline loop with a deterministic per-epoch 32-point log grid search
/// for eta in [1e-4, 2].
RunTrace qng_run(const SubspaceHamiltonian& H, const AmplitudeState& x0, const CGParams& params,
                 double e0, int order);

/// Euclidean CG on theta with the same hybrid beta and Wolfe conditions.
RunTrace flat_cg_run(const SubspaceHamiltonian& H, const AmplitudeState& x0,
                     const CGParams& params, double e0);

/// Adam on theta over a learning-rate grid; returns the best member's trace
/// (fewest epochs to chemical accuracy, ties by smaller final error).
RunTrace adam_run(const SubspaceHamiltonian& H, const AmplitudeState& x0, const CGParams& params,
                  const std::vector<double>& eta_grid, double e0);

}  // namespace gso

#endif
