#include "gso/optimize.hpp"

#include <cmath>
#include <numbers>

namespace gso {

namespace {

// Descent direction v = -J g^{-1} grad_theta(L), attached at x_from_theta.
TangentVector descent_direction(const AngleVector& theta, const SubspaceHamiltonian& H,
                                CallCounters& counters) {
  ++counters.gradient_calls;
  return natural_gradient_x(theta, grad_theta_chain(theta, H));
}

// Power-method-inspired starting step for the line search.
double eta_start(double u_norm, double l0, const CGParams& params) {
  double eta;
  if (std::abs(l0) < 1e-12) {
    eta = 1.0 / u_norm;
  } else {
    const double q = u_norm / (2.0 * std::abs(l0));
    eta = params.c3 / u_norm * std::acos(1.0 / std::sqrt(1.0 + q * q));
  }
  if (params.molecule_mode) eta = std::max(eta, std::numbers::pi / (4.0 * u_norm));
  return eta;
}

// Shared stopping bookkeeping: chemical-accuracy halt and early stopping.
struct StopTracker {
  const CGParams& params;
  double e0;
  std::optional<int> acc_epoch;
  int flat = 0;
  int rise = 0;
  bool have_prev = false;
  double prev_loss = 0.0;
  std::string reason;

  StopTracker(const CGParams& p, double ground) : params(p), e0(ground) {}

  double error_metric(double l) const {
    const double abs_err = std::abs(l - e0);
    return params.chem_mode_rel ? abs_err / std::max(std::abs(e0), 1e-300) : abs_err;
  }

  // Records the epoch's loss; true means the run should stop.
  bool update(int epoch, double l) {
    const double metric = error_metric(l);
    if (!acc_epoch && std::isfinite(metric) && metric <= params.chem_acc) acc_epoch = epoch;
    if (have_prev) {
      const double dl = l - prev_loss;
      if (dl > 0.0) {
        ++rise;
        flat = 0;
      } else {
        rise = 0;
        flat = (-dl < params.early_stop_delta) ? flat + 1 : 0;
      }
      if (flat >= params.early_stop_flat) reason = "early_stop_flat";
      if (rise >= params.early_stop_rise) reason = "early_stop_rise";
    }
    prev_loss = l;
    have_prev = true;
    if (reason.empty() && acc_epoch && epoch >= *acc_epoch + params.halt_after_acc)
      reason = "chem_acc";
    return !reason.empty();
  }
};

EpochRecord make_record(int epoch, double l, double e0, double grad_norm, double eta, double beta,
                        int backtracks, std::vector<Eigen::Index> resets,
                        const CallCounters& counters) {
  EpochRecord rec;
  rec.epoch = epoch;
  rec.loss = l;
  rec.abs_error = std::abs(l - e0);
  rec.rel_error = rec.abs_error / std::max(std::abs(e0), 1e-300);
  rec.grad_norm = grad_norm;
  rec.eta = eta;
  rec.beta = beta;
  rec.backtracks = backtracks;
  rec.resets = std::move(resets);
  rec.loss_calls = counters.loss_calls;
  rec.gradient_calls = counters.gradient_calls;
  return rec;
}

void finalize_trace(RunTrace& trace, const AmplitudeState& x, double l,
                    const CallCounters& counters, const StopTracker& tracker) {
  trace.final_x = x.coords();
  trace.final_loss = l;
  trace.counters = counters;
  trace.epochs_to_chem_acc = tracker.acc_epoch;
  if (trace.stop_reason.empty()) trace.stop_reason = tracker.reason;
}

// One golden-section pass over [0, hi] minimizing loss along the geodesic.
double golden_section_eta(const AmplitudeState& x, const TangentVector& u, double hi,
                          const SubspaceHamiltonian& H, CallCounters& counters) {
  constexpr double invphi = 0.6180339887498949;
  double a = 0.0, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = loss(exp_map(x, u, c), H, &counters);
  double fd = loss(exp_map(x, u, d), H, &counters);
  for (int it = 0; it < 20; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = loss(exp_map(x, u, c), H, &counters);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = loss(exp_map(x, u, d), H, &counters);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

OptimizerState make_optimizer_state(const AmplitudeState& x0, const SubspaceHamiltonian& H) {
  AngleVector theta = theta_from_x(x0);
  AmplitudeState x = x_from_theta(theta);
  CallCounters counters;
  TangentVector v = descent_direction(theta, H, counters);
  TangentVector u = v;
  return OptimizerState{std::move(x), std::move(theta), std::move(v), std::move(u),
                        0.0,          0,                counters};
}

OptimizerState egt_step(const OptimizerState& state, const SubspaceHamiltonian& H, double eta) {
  OptimizerState next = state;
  const AmplitudeState moved = exp_map(state.x, state.v, eta);
  next.theta = theta_from_x(moved);
  next.x = x_from_theta(next.theta);
  next.v = descent_direction(next.theta, H, next.counters);
  next.u = next.v;
  next.eta_prev = eta;
  next.epoch = state.epoch + 1;
  return next;
}

TransportResult vector_transport_scaled(const OptimizerState& state, double eta) {
  TangentVector transported = parallel_transport(state.x, state.u, state.u, eta);
  const double tn = transported.norm();
  const double s = tn > 0.0 ? std::min(1.0, state.u.norm() / tn) : 1.0;
  return TransportResult{std::move(transported), s};
}

double beta_hybrid(const Vector& v_new, const Vector& v_old, const Vector& u_old,
                   const Vector& transported_u, const Vector& transported_negv, double s_t,
                   double l_t) {
  const Vector g_new = -v_new;  // gradient = -descent direction
  const double denom = g_new.dot(s_t * transported_u) - (-v_old).dot(u_old);
  if (std::abs(denom) < 1e-300) return 0.0;
  const double dy = g_new.dot(g_new) / denom;
  const double hs = g_new.dot(g_new - l_t * transported_negv) / denom;
  return std::max(0.0, std::min(dy, hs));
}

WolfeResult wolfe_line_search(OptimizerState& state, const SubspaceHamiltonian& H,
                              const TangentVector& u, const CGParams& params) {
  const double gdotu = -state.v.components().dot(u.components());  // <-v, u>
  if (gdotu >= 0.0)
    throw std::invalid_argument("wolfe_line_search: u is not a descent direction");
  const double u_norm = u.norm();
  const double l0 = loss(state.x, H, &state.counters);
  double eta0 = eta_start(u_norm, l0, params);
  if (params.golden_section)
    eta0 = std::max(golden_section_eta(state.x, u, 2.0 * eta0, H, state.counters),
                    params.eta_floor);

  struct Probe {
    double l1 = 0.0;
    double dphi = 0.0;  // geodesic directional derivative <-v', T(u)>
    bool singular = false;
    bool armijo = false;
    bool curvature = false;
  };
  auto probe = [&](double eta) {
    Probe p;
    const AmplitudeState x1 = exp_map(state.x, u, eta);
    p.l1 = loss(x1, H, &state.counters);
    p.armijo = p.l1 - l0 <= params.c1 * eta * gdotu;
    try {
      const TangentVector v1 = descent_direction(theta_from_x(x1), H, state.counters);
      const TangentVector tu = parallel_transport(state.x, u, u, eta);
      p.dphi = -v1.components().dot(tu.components());
      p.curvature = std::abs(p.dphi) <= params.c2 * std::abs(gdotu);
    } catch (const SingularMetric&) {
      p.singular = true;  // candidate lands on a coordinate singularity
    }
    return p;
  };

  double eta = eta0;
  for (int k = 0; k <= params.max_backtracks && eta >= params.eta_floor; ++k, eta *= 0.5) {
    const Probe p = probe(eta);
    if (!p.singular && p.armijo && p.curvature) return WolfeResult{eta, k};
  }

  // Backtracking only shrinks; when eta_PM undershoots the geodesic minimizer
  // the curvature condition needs a larger step. Expand, then bisect the
  // bracket. Accepted steps still satisfy both inequalities.
  double lo = 0.0, hi = -1.0, phi_lo = l0;
  eta = eta0;
  int k = 0;
  for (; k <= params.max_backtracks; ++k, eta *= 2.0) {
    const Probe p = probe(eta);
    if (p.singular || !p.armijo || p.l1 >= phi_lo) {
      hi = eta;
      break;
    }
    if (p.curvature) return WolfeResult{eta, k};
    if (p.dphi >= 0.0) {
      hi = lo;
      lo = eta;
      phi_lo = p.l1;
      break;
    }
    lo = eta;
    phi_lo = p.l1;
  }
  if (hi >= 0.0) {
    for (; k <= params.max_backtracks && std::abs(hi - lo) > params.eta_floor; ++k) {
      const double mid = 0.5 * (lo + hi);
      const Probe p = probe(mid);
      if (p.singular || !p.armijo || p.l1 >= phi_lo) {
        hi = mid;
        continue;
      }
      if (p.curvature) return WolfeResult{mid, k};
      if (p.dphi * (hi - lo) >= 0.0) hi = lo;
      lo = mid;
      phi_lo = p.l1;
    }
  }
  throw LineSearchFailed("wolfe_line_search: no admissible step above eta_floor");
}

RunTrace egt_cg_run(const SubspaceHamiltonian& H, const AmplitudeState& x0,
                    const CGParams& params, double e0, bool use_cg) {
  RunTrace trace;
  trace.e0 = e0;
  StopTracker tracker(params, e0);

  // Canonicalize and de-singularize the starting point.
  AngleVector theta0 = theta_from_x(x0);
  {
    auto [reg, reset] = regularize_singularities(theta0, params.tau);
    theta0 = reg;
  }
  CallCounters counters;
  AmplitudeState x = x_from_theta(theta0);
  TangentVector v = descent_direction(theta0, H, counters);
  TangentVector u = v;
  OptimizerState state{x, theta0, v, u, 0.0, 0, counters};

  double cur_loss = loss(state.x, H, &state.counters);
  trace.records.push_back(make_record(0, cur_loss, e0, state.v.norm(), 0.0, 0.0, 0, {},
                                      state.counters));
  if (tracker.update(0, cur_loss)) {
    finalize_trace(trace, state.x, cur_loss, state.counters, tracker);
    return trace;
  }

  bool restarted_this_epoch = false;
  for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
    const double vdotu = state.v.components().dot(state.u.components());
    const double un2 = state.u.components().squaredNorm();
    const double res = un2 > 0.0 ? vdotu * vdotu / un2 : 0.0;
    if (std::abs(res) < params.epsilon) {
      trace.stop_reason = "residual";
      break;
    }
    if (vdotu <= 0.0) {  // u lost descent: restart with steepest direction
      state.u = state.v;
      restarted_this_epoch = true;
    }

    // A line-search failure after chemical accuracy is numerical convergence,
    // not an abort: no further decrease is resolvable in double precision.
    const char* ls_fail_reason = tracker.acc_epoch ? "chem_acc" : "aborted_line_search";
    WolfeResult ls;
    try {
      ls = wolfe_line_search(state, H, state.u, params);
    } catch (const LineSearchFailed&) {
      if (restarted_this_epoch) {
        trace.stop_reason = ls_fail_reason;
        break;
      }
      state.u = state.v;
      restarted_this_epoch = true;
      try {
        ls = wolfe_line_search(state, H, state.u, params);
      } catch (const LineSearchFailed&) {
        trace.stop_reason = ls_fail_reason;
        break;
      }
    }

    // Transports along the accepted step, evaluated at the old point.
    const TransportResult tu = vector_transport_scaled(state, ls.eta);
    const TangentVector tnegv =
        parallel_transport(state.x, state.u, project_tangent(state.x, -state.v.components()),
                           ls.eta);
    const double tn = tnegv.norm();
    const double l_t = tn > 0.0 ? std::min(1.0, state.v.norm() / tn) : 1.0;

    const AmplitudeState moved = exp_map(state.x, state.u, ls.eta);
    AngleVector theta1 = theta_from_x(moved);
    auto [theta_reg, resets] = regularize_singularities(theta1, params.tau);
    const bool reset = !resets.empty();
    theta1 = theta_reg;
    AmplitudeState x1 = x_from_theta(theta1);
    TangentVector v1 = descent_direction(theta1, H, state.counters);

    double beta = 0.0;
    TangentVector u1 = v1;
    if (use_cg && !reset) {
      beta = beta_hybrid(v1.components(), state.v.components(), state.u.components(),
                         tu.transported.components(), tnegv.components(), tu.s, l_t);
    }
    if (use_cg && !reset && beta != 0.0) {
      u1 = project_tangent(x1, v1.components() + beta * tu.s * tu.transported.components());
      if (v1.components().dot(u1.components()) <= 0.0) {  // keep u a descent direction
        beta = 0.0;
        u1 = v1;
      }
    }

    state.x = std::move(x1);
    state.theta = std::move(theta1);
    state.v = std::move(v1);
    state.u = std::move(u1);
    state.eta_prev = ls.eta;
    state.epoch = epoch;
    restarted_this_epoch = false;

    cur_loss = loss(state.x, H, &state.counters);
    trace.records.push_back(make_record(epoch, cur_loss, e0, state.v.norm(), ls.eta, beta,
                                        ls.backtracks, std::move(resets), state.counters));
    if (tracker.update(epoch, cur_loss)) break;
  }
  if (trace.stop_reason.empty() && tracker.reason.empty()) trace.stop_reason = "max_epochs";
  finalize_trace(trace, state.x, cur_loss, state.counters, tracker);
  return trace;
}

OptimizerState qng_step(const OptimizerState& state, const SubspaceHamiltonian& H, double eta,
                        int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("qng_step: order must be 1 or 2");
  OptimizerState next = state;
  if (order == 1) {
    const Vector g = metric_diag_raw(state.theta.angles());
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      if (g[j] == 0.0) throw SingularMetric(j);
    }
    const Vector grad = grad_theta_chain(state.theta, H);
    const Vector raw = state.theta.angles() - eta * grad.cwiseQuotient(g);
    // Re-canonicalize through the sphere: raw angles may leave [0, pi].
    next.theta = theta_from_x(x_from_theta(raw));
  } else {
    const Vector& vc = state.v.components();
    Vector xt = (1.0 - eta * eta * vc.squaredNorm() / 2.0) * state.x.coords() + eta * vc;
    next.theta = theta_from_x(AmplitudeState::normalized(std::move(xt)));
  }
  next.x = x_from_theta(next.theta);
  next.v = descent_direction(next.theta, H, next.counters);
  next.u = next.v;
  next.eta_prev = eta;
  next.epoch = state.epoch + 1;
  return next;
}

namespace {

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < points; ++i)
    out[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (points - 1));
  return out;
}

}  // namespace

RunTrace qng_run(const SubspaceHamiltonian& H, const AmplitudeState& x0, const CGParams& params,
                 double e0, int order) {
  RunTrace trace;
  trace.e0 = e0;
  StopTracker tracker(params, e0);
  const std::vector<double> grid = log_grid(1e-4, 2.0, 32);

  AngleVector theta0 = theta_from_x(x0);
  {
    auto [reg, reset] = regularize_singularities(theta0, params.tau);
    theta0 = reg;
  }
  CallCounters counters;
  AmplitudeState x = x_from_theta(theta0);
  TangentVector v = descent_direction(theta0, H, counters);
  OptimizerState state{x, theta0, v, v, 0.0, 0, counters};

  double cur_loss = loss(state.x, H, &state.counters);
  trace.records.push_back(
      make_record(0, cur_loss, e0, state.v.norm(), 0.0, 0.0, 0, {}, state.counters));
  if (tracker.update(0, cur_loss)) {
    finalize_trace(trace, state.x, cur_loss, state.counters, tracker);
    return trace;
  }

  for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
    if (state.v.components().squaredNorm() < params.epsilon) {
      trace.stop_reason = "residual";
      break;
    }
    // Deterministic per-epoch scalar search over the step size.
    double best_eta = grid.front();
    double best_loss = std::numeric_limits<double>::infinity();
    const Vector g = metric_diag_raw(state.theta.angles());
    Vector scaled;
    if (order == 1) {
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        if (g[j] == 0.0) throw SingularMetric(j);
      }
      scaled = grad_theta_chain(state.theta, H).cwiseQuotient(g);
      ++state.counters.gradient_calls;
    }
    for (double eta : grid) {
      double cand;
      if (order == 1) {
        cand = loss(x_from_theta(Vector(state.theta.angles() - eta * scaled)), H,
                    &state.counters);
      } else {
        const Vector& vc = state.v.components();
        Vector xt =
            (1.0 - eta * eta * vc.squaredNorm() / 2.0) * state.x.coords() + eta * vc;
        cand = loss(AmplitudeState::normalized(std::move(xt)), H, &state.counters);
      }
      if (cand < best_loss) {
        best_loss = cand;
        best_eta = eta;
      }
    }
    state = qng_step(state, H, best_eta, order);
    auto [theta_reg, resets] = regularize_singularities(state.theta, params.tau);
    if (!resets.empty()) {
      state.theta = theta_reg;
      state.x = x_from_theta(state.theta);
      state.v = descent_direction(state.theta, H, state.counters);
      state.u = state.v;
    }
    cur_loss = loss(state.x, H, &state.counters);
    trace.records.push_back(make_record(epoch, cur_loss, e0, state.v.norm(), best_eta, 0.0, 0,
                                        std::move(resets), state.counters));
    if (tracker.update(epoch, cur_loss)) break;
  }
  if (trace.stop_reason.empty() && tracker.reason.empty()) trace.stop_reason = "max_epochs";
  finalize_trace(trace, state.x, cur_loss, state.counters, tracker);
  return trace;
}

namespace {

// Backtracking strong-Wolfe search for the flat-space baselines (theta space).
struct FlatWolfe {
  double eta = 0.0;
  int backtracks = 0;
};

FlatWolfe flat_wolfe(const Vector& theta, const Vector& grad, const Vector& dir, double l0,
                     const SubspaceHamiltonian& H, const CGParams& params,
                     CallCounters& counters) {
  const double gdotd = grad.dot(dir);
  if (gdotd >= 0.0) throw std::invalid_argument("flat_wolfe: not a descent direction");
  int evals = 0;
  auto phi = [&](double eta, double& dphi) {
    const Vector cand = theta + eta * dir;
    const double l = loss(x_from_theta(cand), H, &counters);
    const Vector g1 = grad_theta_chain(cand, H);
    ++counters.gradient_calls;
    ++evals;
    dphi = g1.dot(dir);
    return l;
  };
  auto armijo = [&](double eta, double l1) { return l1 - l0 <= params.c1 * eta * gdotd; };
  auto curvature = [&](double dphi) { return std::abs(dphi) <= params.c2 * std::abs(gdotd); };

  // Bracketing phase: expand until the step overshoots or the slope turns.
  double eta_prev = 0.0, phi_prev = l0;
  double eta = eta_start(dir.norm(), l0, params);
  double lo = -1.0, hi = -1.0, phi_lo = l0;
  for (int i = 0; i < params.max_backtracks && lo < 0.0; ++i) {
    double dphi = 0.0;
    const double p = phi(eta, dphi);
    if (!armijo(eta, p) || (i > 0 && p >= phi_prev)) {
      lo = eta_prev;
      hi = eta;
      phi_lo = phi_prev;
    } else if (curvature(dphi)) {
      return FlatWolfe{eta, evals};
    } else if (dphi >= 0.0) {
      lo = eta;
      hi = eta_prev;
      phi_lo = p;
    } else {
      eta_prev = eta;
      phi_prev = p;
      eta *= 2.0;
    }
  }
  // Zoom phase: bisect the bracket until the curvature condition holds.
  if (lo >= 0.0) {
    for (int i = 0; i < params.max_backtracks && std::abs(hi - lo) > params.eta_floor; ++i) {
      const double mid = 0.5 * (lo + hi);
      double dphi = 0.0;
      const double p = phi(mid, dphi);
      if (!armijo(mid, p) || p >= phi_lo) {
        hi = mid;
      } else {
        if (curvature(dphi)) return FlatWolfe{mid, evals};
        if (dphi * (hi - lo) >= 0.0) hi = lo;
        lo = mid;
        phi_lo = p;
      }
    }
  }
  // Fallback: plain sufficient-decrease backtracking keeps the run monotone
  // when no strong-Wolfe window is resolvable in double precision.
  eta = eta_start(dir.norm(), l0, params);
  for (int k = 0; k <= params.max_backtracks && eta >= params.eta_floor; ++k, eta *= 0.5) {
    const double l1 = loss(x_from_theta(theta + eta * dir), H, &counters);
    ++evals;
    if (armijo(eta, l1)) return FlatWolfe{eta, evals};
  }
  throw LineSearchFailed("flat_wolfe: no admissible step above eta_floor");
}

}  // namespace

RunTrace flat_cg_run(const SubspaceHamiltonian& H, const AmplitudeState& x0,
                     const CGParams& params, double e0) {
  RunTrace trace;
  trace.e0 = e0;
  StopTracker tracker(params, e0);
  CallCounters counters;

  Vector theta = theta_from_x(x0).angles();
  Vector grad = grad_theta_chain(theta, H);
  ++counters.gradient_calls;
  Vector dir = -grad;
  double cur_loss = loss(x_from_theta(theta), H, &counters);
  trace.records.push_back(make_record(0, cur_loss, e0, grad.norm(), 0.0, 0.0, 0, {}, counters));
  if (tracker.update(0, cur_loss)) {
    finalize_trace(trace, x_from_theta(theta), cur_loss, counters, tracker);
    return trace;
  }

  bool restarted = false;
  for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
    const double gdotd = grad.dot(dir);
    const double dn2 = dir.squaredNorm();
    const double res = dn2 > 0.0 ? gdotd * gdotd / dn2 : 0.0;
    if (std::abs(res) < params.epsilon) {
      trace.stop_reason = "residual";
      break;
    }
    if (gdotd >= 0.0) {
      dir = -grad;
      restarted = true;
    }
    const char* ls_fail_reason = tracker.acc_epoch ? "chem_acc" : "aborted_line_search";
    FlatWolfe ls;
    try {
      ls = flat_wolfe(theta, grad, dir, cur_loss, H, params, counters);
    } catch (const LineSearchFailed&) {
      if (restarted) {
        trace.stop_reason = ls_fail_reason;
        break;
      }
      dir = -grad;
      restarted = true;
      try {
        ls = flat_wolfe(theta, grad, dir, cur_loss, H, params, counters);
      } catch (const LineSearchFailed&) {
        trace.stop_reason = ls_fail_reason;
        break;
      }
    }
    restarted = false;

    const Vector theta1 = theta + ls.eta * dir;
    const Vector grad1 = grad_theta_chain(theta1, H);
    ++counters.gradient_calls;
    // Euclidean hybrid DY/HS beta (no transport, s = l = 1).
    const double denom = grad1.dot(dir) - grad.dot(dir);
    double beta = 0.0;
    if (std::abs(denom) >= 1e-300) {
      const double dy = grad1.squaredNorm() / denom;
      const double hs = grad1.dot(grad1 - grad) / denom;
      beta = std::max(0.0, std::min(dy, hs));
    }
    Vector dir1 = -grad1 + beta * dir;
    if (grad1.dot(dir1) >= 0.0) {
      beta = 0.0;
      dir1 = -grad1;
    }

    theta = theta1;
    grad = grad1;
    dir = std::move(dir1);
    cur_loss = loss(x_from_theta(theta), H, &counters);
    trace.records.push_back(
        make_record(epoch, cur_loss, e0, grad.norm(), ls.eta, beta, ls.backtracks, {}, counters));
    if (tracker.update(epoch, cur_loss)) break;
  }
  if (trace.stop_reason.empty() && tracker.reason.empty()) trace.stop_reason = "max_epochs";
  finalize_trace(trace, x_from_theta(theta), cur_loss, counters, tracker);
  return trace;
}

RunTrace adam_run(const SubspaceHamiltonian& H, const AmplitudeState& x0, const CGParams& params,
                  const std::vector<double>& eta_grid, double e0) {
  if (eta_grid.empty()) throw std::invalid_argument("adam_run: empty eta grid");
  std::optional<RunTrace> best;
  auto better = [](const RunTrace& a, const RunTrace& b) {
    const int ea = a.epochs_to_chem_acc.value_or(std::numeric_limits<int>::max());
    const int eb = b.epochs_to_chem_acc.value_or(std::numeric_limits<int>::max());
    if (ea != eb) return ea < eb;
    return std::abs(a.final_loss - a.e0) < std::abs(b.final_loss - b.e0);
  };
  for (double lr : eta_grid) {
    RunTrace trace;
    trace.e0 = e0;
    StopTracker tracker(params, e0);
    CallCounters counters;

    Vector theta = theta_from_x(x0).angles();
    Vector m = Vector::Zero(theta.size());
    Vector s = Vector::Zero(theta.size());
    double cur_loss = loss(x_from_theta(theta), H, &counters);
    {
      Vector g0 = grad_theta_chain(theta, H);
      ++counters.gradient_calls;
      trace.records.push_back(make_record(0, cur_loss, e0, g0.norm(), 0.0, 0.0, 0, {}, counters));
    }
    if (!tracker.update(0, cur_loss)) {
      for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
        const Vector g = grad_theta_chain(theta, H);
        ++counters.gradient_calls;
        if (g.squaredNorm() < params.epsilon) {
          trace.stop_reason = "residual";
          break;
        }
        m = params.adam_beta1 * m + (1.0 - params.adam_beta1) * g;
        s = params.adam_beta2 * s + (1.0 - params.adam_beta2) * g.cwiseProduct(g);
        const double bc1 = 1.0 - std::pow(params.adam_beta1, epoch);
        const double bc2 = 1.0 - std::pow(params.adam_beta2, epoch);
        const Vector mhat = m / bc1;
        const Vector shat = s / bc2;
        theta -= lr * (mhat.array() / (shat.array().sqrt() + params.adam_eps)).matrix();
        cur_loss = loss(x_from_theta(theta), H, &counters);
        trace.records.push_back(
            make_record(epoch, cur_loss, e0, g.norm(), lr, 0.0, 0, {}, counters));
        if (tracker.update(epoch, cur_loss)) break;
      }
    }
    if (trace.stop_reason.empty() && tracker.reason.empty()) trace.stop_reason = "max_epochs";
    finalize_trace(trace, x_from_theta(theta), cur_loss, counters, tracker);
    if (!best || better(trace, *best)) best = std::move(trace);
  }
  return *best;
}

}  // namespace gso
