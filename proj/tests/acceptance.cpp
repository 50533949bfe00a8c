// Acceptance suite: twelve end-to-end criteria, one pass/fail line each.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gso/analysis.hpp"
#include "gso/optimize.hpp"
#include "gso/runio.hpp"

using namespace gso;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
  if (!ok) ++g_failures;
  std::printf("CRITERION %2d %-22s %s  (%s)\n", criterion, name.c_str(), ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

std::mt19937_64& rng() {
  static std::mt19937_64 gen(2024);
  return gen;
}

Vector random_vec(Eigen::Index d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = gauss(rng());
  return v;
}

SubspaceHamiltonian random_hamiltonian(Eigen::Index d) {
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = random_vec(1)[0];
  Matrix sym = 0.5 * (a + a.transpose());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < i; ++j) sym(i, j) = sym(j, i);
  return SubspaceHamiltonian(SubspaceBasis{}, std::move(sym));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --- 1: geometry exactness -------------------------------------------------
void criterion_geometry() {
  double worst_norm = 0.0, worst_iso = 0.0, worst_self = 0.0;
  std::uniform_real_distribution<double> u01(0.0, 3.0);
  for (Eigen::Index d : {2, 4, 8, 16}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const AmplitudeState x = AmplitudeState::normalized(random_vec(d));
      const TangentVector v = project_tangent(x, random_vec(d));
      if (v.norm() == 0.0) continue;
      const double eta = u01(rng());
      worst_norm = std::max(worst_norm, std::abs(exp_map(x, v, eta).coords().norm() - 1.0));
      const TangentVector z1 = project_tangent(x, random_vec(d));
      const TangentVector z2 = project_tangent(x, random_vec(d));
      const TangentVector t1 = parallel_transport(x, v, z1, eta);
      const TangentVector t2 = parallel_transport(x, v, z2, eta);
      worst_iso = std::max(worst_iso, std::abs(t1.components().dot(t2.components()) -
                                               z1.components().dot(z2.components())));
      const double a = eta * v.norm();
      const Vector self = std::cos(a) * v.components() - std::sin(a) * v.norm() * x.coords();
      worst_self =
          std::max(worst_self, (parallel_transport(x, v, v, eta).components() - self)
                                   .cwiseAbs()
                                   .maxCoeff());
    }
  }
  report(1, "geometry-exactness",
         worst_norm <= 1e-12 && worst_iso <= 1e-10 && worst_self <= 1e-12,
         "norm " + fmt(worst_norm) + ", isometry " + fmt(worst_iso) + ", self-transport " +
             fmt(worst_self));
}

// --- 2: gradient-route equivalence ------------------------------------------
void criterion_gradients() {
  double worst_pair = 0.0, worst_nat = 0.0;
  for (Eigen::Index d : {4, 8, 12}) {
    for (int trial = 0; trial < 50; ++trial) {
      const SubspaceHamiltonian H = random_hamiltonian(d);
      const AngleVector theta = theta_from_x(AmplitudeState::normalized(random_vec(d)));
      CallCounters counters;
      const Vector gs = grad_theta_structured(theta, H, counters);
      const Vector gc = grad_theta_chain(theta, H);
      const Vector gf = fd_gradient_oracle(theta, H, 1e-6);
      const double scale = std::max(1.0, gc.norm());
      worst_pair = std::max({worst_pair, (gs - gc).norm() / scale, (gc - gf).norm() / scale,
                             (gs - gf).norm() / scale});
      const TangentVector nat = natural_gradient_x(theta, gc);
      worst_nat = std::max(
          worst_nat, (nat.components() + grad_x(x_from_theta(theta), H)).cwiseAbs().maxCoeff());
    }
  }
  report(2, "gradient-routes", worst_pair <= 1e-6 && worst_nat <= 1e-10,
         "pairwise " + fmt(worst_pair) + ", natural-gradient " + fmt(worst_nat));
}

// --- 3: cost ledger ----------------------------------------------------------
void criterion_ledger() {
  bool ok = true;
  for (Eigen::Index d : {4, 9, 101}) {
    const int m = static_cast<int>(d) - 1;
    const SubspaceHamiltonian H = random_hamiltonian(d);
    CallCounters counters;
    grad_theta_structured(theta_from_x(AmplitudeState::normalized(random_vec(d))), H, counters);
    ok = ok && counters.loss_calls == 2 * static_cast<std::uint64_t>(m) + 1;
    ok = ok && counters.psr_equivalent_calls == 4 * static_cast<std::uint64_t>(m);
  }
  ok = ok && psr_cost_ratio(100) == 303.0 / 800.0;
  ok = ok && std::abs(psr_cost_ratio(100000) - 0.375) < 1e-4;
  report(3, "cost-ledger", ok, "2M+1 loss calls, ratio 3(M+1)/(8M)");
}

// --- 4: variance theorem ------------------------------------------------------
void criterion_variance() {
  double worst_z = 0.0;
  for (Eigen::Index d : {4, 8}) {
    for (int trial = 0; trial < 5; ++trial) {
      const SubspaceHamiltonian H = random_hamiltonian(d);
      std::mt19937_64 gen(900 + trial + static_cast<int>(d));
      const VarianceReport rep = mc_variances(H, 1000000, gen);
      worst_z = std::max(worst_z, std::abs(rep.mc_var_loss - rep.closed_form_var_loss) /
                                      rep.mc_var_loss_se);
      for (Eigen::Index j = 0; j < d; ++j) {
        worst_z = std::max(worst_z, std::abs(rep.mc_var_grad[j] - rep.closed_form_var_grad[j]) /
                                        rep.mc_var_grad_se[j]);
      }
    }
  }
  const ClosedFormVariances id =
      closed_form_variances(SubspaceHamiltonian(SubspaceBasis{}, Matrix(Matrix::Identity(6, 6))));
  const bool id_ok = id.var_loss == 0.0 && id.var_grad.cwiseAbs().maxCoeff() == 0.0;
  report(4, "variance-theorem", worst_z <= 3.0 && id_ok, "worst z-score " + fmt(worst_z));
}

// --- 5: moment identities ------------------------------------------------------
void criterion_moments() {
  const Eigen::Index d = 4;
  const std::uint64_t n = 1000000;
  std::mt19937_64 gen(31);
  // Streams: x0 x1, x0^2, x0^4, x0^2 x1^2, x0^6, x0^4 x1^2, x0^2 x1^2 x2^2.
  constexpr int kStreams = 7;
  double s1[kStreams] = {0}, s2[kStreams] = {0};
  for (std::uint64_t i = 0; i < n; ++i) {
    const Vector x = sample_uniform_sphere(d, gen).coords();
    const double a = x[0], b = x[1], c = x[2];
    const double vals[kStreams] = {a * b,         a * a,         a * a * a * a,
                                   a * a * b * b, std::pow(a, 6.0), std::pow(a, 4.0) * b * b,
                                   a * a * b * b * c * c};
    for (int k = 0; k < kStreams; ++k) {
      s1[k] += vals[k];
      s2[k] += vals[k] * vals[k];
    }
  }
  const double dd = static_cast<double>(d);
  const double m4 = dd * (dd + 2.0);
  const double m6 = dd * (dd + 2.0) * (dd + 4.0);
  const double targets[kStreams] = {0.0,      1.0 / dd, 3.0 / m4, 1.0 / m4,
                                    15.0 / m6, 3.0 / m6, 1.0 / m6};
  double worst_z = 0.0;
  for (int k = 0; k < kStreams; ++k) {
    const double mean = s1[k] / static_cast<double>(n);
    const double var = s2[k] / static_cast<double>(n) - mean * mean;
    const double se = std::sqrt(var / static_cast<double>(n));
    worst_z = std::max(worst_z, std::abs(mean - targets[k]) / se);
  }
  report(5, "moment-identities", worst_z <= 3.0, "worst z-score " + fmt(worst_z));
}

// --- 6: QITE identity -----------------------------------------------------------
void criterion_qite() {
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d = 2 + trial % 15;
    const SubspaceHamiltonian H = random_hamiltonian(d);
    const AmplitudeState x = AmplitudeState::normalized(random_vec(d));
    for (double eta : {0.01, 0.1, 1.0})
      worst = std::max(worst, qite_equivalence_check(x, H, eta));
  }
  report(6, "qite-identity", worst <= 1e-10, "max deviation " + fmt(worst));
}

// --- 7: Wolfe audit ----------------------------------------------------------------
bool audit_run(const SubspaceHamiltonian& H, const AmplitudeState& x0, const RunTrace& trace,
               const CGParams& params) {
  OptimizerState state = make_optimizer_state(x0, H);
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    const EpochRecord& rec = trace.records[i];
    auto satisfies = [&](const TangentVector& u) {
      const double gdotu = -state.v.components().dot(u.components());
      if (gdotu >= 0.0) return false;
      const double l0 = loss(state.x, H);
      const AmplitudeState x1 = exp_map(state.x, u, rec.eta);
      if (!(loss(x1, H) - l0 <= params.c1 * rec.eta * gdotu)) return false;
      const AngleVector t1 = theta_from_x(x1);
      const TangentVector v1 = natural_gradient_x(t1, grad_theta_chain(t1, H));
      const TangentVector tu = parallel_transport(state.x, u, u, rec.eta);
      return std::abs(-v1.components().dot(tu.components())) <= params.c2 * std::abs(gdotu);
    };
    const bool on_u = satisfies(state.u);
    if (!on_u && !satisfies(state.v)) return false;
    if (!(rec.loss < trace.records[i - 1].loss)) return false;
    const TangentVector u_used = on_u ? state.u : state.v;
    const TangentVector tu = parallel_transport(state.x, u_used, u_used, rec.eta);
    const double s = std::min(1.0, u_used.norm() / tu.norm());
    AngleVector theta1 = theta_from_x(exp_map(state.x, u_used, rec.eta));
    auto [reg, resets] = regularize_singularities(theta1, params.tau);
    state.x = x_from_theta(reg);
    state.theta = reg;
    state.v = natural_gradient_x(reg, grad_theta_chain(reg, H));
    state.u = (rec.beta == 0.0 || !resets.empty())
                  ? state.v
                  : project_tangent(state.x,
                                    state.v.components() + rec.beta * s * tu.components());
  }
  return true;
}

void criterion_wolfe_audit() {
  bool ok = true;
  const CGParams params;
  for (int n : {4, 6, 8}) {
    auto [h, basis] = build_xxz(n, 0.5);
    const SubspaceHamiltonian H = project_pauli(h, basis);
    const double e0 = exact_ground(H).e0;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      const AmplitudeState x0 = haar_state(H.dim(), seed);
      const RunTrace trace = egt_cg_run(H, x0, params, e0);
      ok = ok && audit_run(H, x0, trace, params);
    }
  }
  report(7, "wolfe-audit", ok, "XXZ n in {4,6,8}, 3 seeds each, re-evaluated");
}

// --- 8: TFIM reproduction ----------------------------------------------------------
void criterion_tfim() {
  auto [h, basis] = build_tfim(9, 0.033, 3);
  const SubspaceHamiltonian H = project_pauli(h, basis);
  const double e0 = exact_ground(H).e0;
  CGParams params;
  params.max_epochs = 30;
  params.halt_after_acc = 1000000;  // run the full budget
  params.early_stop_flat = 1000000;
  params.early_stop_rise = 1000000;
  std::vector<double> epochs_acc, egt_err, flat_err;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const AmplitudeState x0 = haar_state(H.dim(), seed);
    const RunTrace egt = egt_cg_run(H, x0, params, e0);
    const RunTrace flat = flat_cg_run(H, x0, params, e0);
    epochs_acc.push_back(egt.epochs_to_chem_acc
                             ? static_cast<double>(*egt.epochs_to_chem_acc)
                             : static_cast<double>(params.max_epochs));
    egt_err.push_back(std::abs(egt.final_loss - e0) / std::abs(e0));
    flat_err.push_back(std::abs(flat.final_loss - e0) / std::abs(e0));
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };
  const double med_epochs = median(epochs_acc);
  const double med_egt = median(egt_err);
  const double med_flat = median(flat_err);
  report(8, "tfim-reproduction", med_epochs <= 10.0 && med_egt <= 1e-10 && med_egt < med_flat,
         "median epochs " + fmt(med_epochs) + ", EGT-CG err " + fmt(med_egt) + ", flat-CG err " +
             fmt(med_flat));
}

// --- 9: XXZ ordering ----------------------------------------------------------------
void criterion_xxz_ordering() {
  bool ok = true;
  std::string detail;
  for (int n : {4, 6, 8, 10}) {
    auto [h, basis] = build_xxz(n, 0.5);
    const SubspaceHamiltonian H = project_pauli(h, basis);
    const GroundInfo ground = exact_ground(H);
    // Cross-check the dense ED energy against the symmetry-reduced sector.
    const double e0_reduced = exact_ground(symmetry_reduce(H, n)).e0;
    ok = ok && std::abs(ground.e0 - e0_reduced) <= 1e-10 * std::max(1.0, std::abs(ground.e0));

    CGParams params;
    double egt_sum = 0.0, adam_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const AmplitudeState x0 = haar_state(H.dim(), 100 + seed);
      const RunTrace egt = egt_cg_run(H, x0, params, ground.e0);
      const RunTrace adam = adam_run(H, x0, params,
                                     {0.001, 0.005, 0.01, 0.05, 0.1, 0.5}, ground.e0);
      egt_sum += egt.epochs_to_chem_acc ? *egt.epochs_to_chem_acc : params.max_epochs;
      adam_sum += adam.epochs_to_chem_acc ? *adam.epochs_to_chem_acc : params.max_epochs;
    }
    ok = ok && egt_sum < adam_sum;
    detail += "n=" + std::to_string(n) + ": " + fmt(egt_sum / 20.0) + " vs " +
              fmt(adam_sum / 20.0) + "; ";
  }
  report(9, "xxz-ordering", ok, detail);
}

// --- 10: symmetry reduction -----------------------------------------------------------
void criterion_symmetry() {
  bool ok = true;
  for (int n : {4, 6, 8}) {
    auto [h, basis] = build_xxz(n, 0.5);
    const SubspaceHamiltonian H = project_pauli(h, basis);
    const SubspaceHamiltonian reduced = symmetry_reduce(H, n);
    const double e_full = exact_ground(H).e0;
    const double e_red = exact_ground(reduced).e0;
    ok = ok && std::abs(e_full - e_red) <= 1e-10 * std::max(1.0, std::abs(e_full));
    const double bound = std::ceil(static_cast<double>(binomial(n, n / 2)) * 2.0 / n) + 2.0;
    ok = ok && static_cast<double>(reduced.dim()) <= bound;
  }
  report(10, "symmetry-reduction", ok, "ground energy match 1e-10, dimension bound");
}

// --- 11: warm start --------------------------------------------------------------------
void criterion_warm_start() {
  bool ok = true;
  double worst = 0.0;
  for (auto [n, k] : std::vector<std::pair<int, int>>{{4, 2}, {6, 3}, {8, 4}}) {
    const AmplitudeState w = warm_start_state(n, k, 0.9);
    const SubspaceBasis basis = enumerate_basis(n, FixedHW{k});
    const std::uint32_t hartree = ((1u << k) - 1u) << (n - k);
    const double f = w.coords()[*basis.index_of(hartree)];
    worst = std::max(worst, std::abs(f * f - 0.9));
  }
  ok = worst <= 1e-14;
  report(11, "warm-start", ok, "max |fidelity - 0.9| = " + fmt(worst));
}

// --- 12: determinism ----------------------------------------------------------------------
void criterion_determinism() {
#ifndef GSOPT_PATH
  report(12, "determinism", false, "gsopt path not configured");
#else
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "gso_acceptance_det";
  fs::remove_all(base);
  auto run = [&](const std::string& out) {
    const std::string cmd = std::string(GSOPT_PATH) +
                            " gso --model xxz --n 6 --optimizer egt-cg --init haar:42 --out " +
                            (base / out).string() + " > /dev/null";
    return std::system(cmd.c_str());
  };
  bool ok = run("a") == 0 && run("b") == 0;
  if (ok) {
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const std::string ta = slurp(base / "a" / "trace.csv");
    const std::string tb = slurp(base / "b" / "trace.csv");
    ok = !ta.empty() && ta == tb;
  }
  fs::remove_all(base);
  report(12, "determinism", ok, "byte-identical traces from repeated invocations");
#endif
}

}  // namespace

int main() {
  criterion_geometry();
  criterion_gradients();
  criterion_ledger();
  criterion_variance();
  criterion_moments();
  criterion_qite();
  criterion_wolfe_audit();
  criterion_tfim();
  criterion_xxz_ordering();
  criterion_symmetry();
  criterion_warm_start();
  criterion_determinism();
  if (g_failures == 0) {
    std::printf("ALL 12 ACCEPTANCE CRITERIA PASSED\n");
    return 0;
  }
  std::printf("%d ACCEPTANCE CRITERIA FAILED\n", g_failures);
  return 1;
}
