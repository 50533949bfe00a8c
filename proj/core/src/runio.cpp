#include "gso/runio.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gso/analysis.hpp"
#include "gso/gradients.hpp"

namespace gso {

namespace {

using json = nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string optimizer_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::EGT: return "egt";
    case OptimizerKind::EGTCG: return "egt-cg";
    case OptimizerKind::QNG1: return "qng1";
    case OptimizerKind::QNG2: return "qng2";
    case OptimizerKind::FlatCG: return "flat-cg";
    case OptimizerKind::Adam: return "adam";
  }
  throw std::logic_error("optimizer_name: unreachable");
}

OptimizerKind optimizer_from_name(const std::string& name) {
  if (name == "egt") return OptimizerKind::EGT;
  if (name == "egt-cg") return OptimizerKind::EGTCG;
  if (name == "qng1") return OptimizerKind::QNG1;
  if (name == "qng2") return OptimizerKind::QNG2;
  if (name == "flat-cg") return OptimizerKind::FlatCG;
  if (name == "adam") return OptimizerKind::Adam;
  throw ConfigError("unknown optimizer '" + name + "'");
}

AmplitudeState haar_state(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_uniform_sphere(d, rng);
}

namespace {

std::string model_name(ModelKind m) {
  switch (m) {
    case ModelKind::XXZ: return "xxz";
    case ModelKind::TFIM: return "tfim";
    case ModelKind::PauliFile: return "pauli-file";
  }
  throw std::logic_error("model_name: unreachable");
}

void check_config(const RunConfig& c) {
  if (c.model == ModelKind::XXZ) {
    if (c.n % 2 != 0 || c.n < 4 || c.n > 16)
      throw ConfigError("xxz: n must be even and in [4, 16]");
  } else if (c.model == ModelKind::TFIM) {
    if (c.n < 3 || c.n > 24) throw ConfigError("tfim: n must be in [3, 24]");
    const int k = c.k < 0 ? 3 : c.k;
    if (k < 0 || k > c.n) throw ConfigError("tfim: k must be in [0, n]");
  } else if (c.hamiltonian_file.empty()) {
    throw ConfigError("pauli-file model requires --hamiltonian");
  }
  if (c.init == InitKind::Warm && (c.warm_alpha <= 0.0 || c.warm_alpha >= 1.0))
    throw ConfigError("warm init: alpha must be in (0, 1)");
  if (c.init == InitKind::ExplicitFile && c.init_file.empty())
    throw ConfigError("explicit init requires a vector file");
  if (c.params.max_epochs < 1) throw ConfigError("--epochs-max must be >= 1");
  if (c.params.chem_acc <= 0.0) throw ConfigError("--chem-acc must be > 0");
  if (c.num_seeds < 1) throw ConfigError("--seeds must be >= 1");
  if (c.threads < 1) throw ConfigError("--threads must be >= 1");
}

SubspaceHamiltonian build_model(const RunConfig& c) {
  if (c.model == ModelKind::XXZ) {
    auto [h, basis] = build_xxz(c.n, c.delta);
    if (c.k >= 0 && c.k != c.n / 2) throw ConfigError("xxz: subspace is fixed at k = n/2");
    return project_pauli(h, basis);
  }
  if (c.model == ModelKind::TFIM) {
    auto [h, basis] = build_tfim(c.n, c.field, c.k < 0 ? 3 : c.k);
    return project_pauli(h, basis);
  }
  auto [h, basis] = load_pauli_json(c.hamiltonian_file);
  return project_pauli(h, basis);
}

// Warm start in an arbitrary basis: sqrt(alpha) on the Hartree label,
// uniform remainder.
AmplitudeState warm_in_basis(const SubspaceBasis& basis, double alpha) {
  const Eigen::Index d = basis.dim();
  if (d == 1) throw ConfigError("warm init: one-dimensional subspace has no remainder");
  const int n = basis.n;
  const int k = basis.k >= 0 ? basis.k : 0;
  const std::uint32_t hartree = k == 0 ? 0u : ((1u << k) - 1u) << (n - k);
  const auto idx = basis.index_of(hartree);
  if (!idx) throw ConfigError("warm init: Hartree label not in the subspace");
  Vector c = Vector::Constant(d, std::sqrt((1.0 - alpha) / static_cast<double>(d - 1)));
  c[*idx] = std::sqrt(alpha);
  return AmplitudeState::normalized(std::move(c));
}

AmplitudeState initial_state(const RunConfig& c, const SubspaceBasis& basis) {
  switch (c.init) {
    case InitKind::Warm:
      return warm_in_basis(basis, c.warm_alpha);
    case InitKind::Haar:
      return haar_state(basis.dim(), c.seed);
    case InitKind::ExplicitFile: {
      std::ifstream in(c.init_file);
      if (!in) throw ConfigError("cannot open init vector file " + c.init_file);
      std::vector<double> vals;
      double v;
      while (in >> v) vals.push_back(v);
      if (static_cast<Eigen::Index>(vals.size()) != basis.dim())
        throw ConfigError("init vector length does not match subspace dimension");
      return AmplitudeState::normalized(
          Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size())));
    }
  }
  throw std::logic_error("initial_state: unreachable");
}

RunTrace dispatch(const RunConfig& c, const SubspaceHamiltonian& H, const AmplitudeState& x0,
                  double e0) {
  switch (c.optimizer) {
    case OptimizerKind::EGT: return egt_cg_run(H, x0, c.params, e0, false);
    case OptimizerKind::EGTCG: return egt_cg_run(H, x0, c.params, e0, true);
    case OptimizerKind::QNG1: return qng_run(H, x0, c.params, e0, 1);
    case OptimizerKind::QNG2: return qng_run(H, x0, c.params, e0, 2);
    case OptimizerKind::FlatCG: return flat_cg_run(H, x0, c.params, e0);
    case OptimizerKind::Adam: return adam_run(H, x0, c.params, c.adam_eta_grid, e0);
  }
  throw std::logic_error("dispatch: unreachable");
}

}  // namespace

RunResult run_gso(const RunConfig& config) {
  check_config(config);
  const SubspaceHamiltonian H = build_model(config);
  const GroundInfo ground = exact_ground(H);
  const AmplitudeState x0 = initial_state(config, H.basis());

  RunResult result;
  result.trace = dispatch(config, H, x0, ground.e0);

  RunSummary& s = result.summary;
  s.model = model_name(config.model);
  s.optimizer = optimizer_name(config.optimizer);
  s.n = H.basis().n;
  s.d = H.dim();
  s.seed = config.seed;
  s.e0 = ground.e0;
  s.final_energy = result.trace.final_loss;
  s.final_abs_error = std::abs(s.final_energy - s.e0);
  s.final_rel_error = s.final_abs_error / std::max(std::abs(s.e0), 1e-300);
  s.final_fidelity =
      fidelity_to_ground(AmplitudeState::normalized(result.trace.final_x), ground.basis);
  s.epochs_to_chem_acc = result.trace.epochs_to_chem_acc;
  s.epochs = static_cast<int>(result.trace.records.size()) - 1;
  s.loss_calls = result.trace.counters.loss_calls;
  s.gradient_calls = result.trace.counters.gradient_calls;
  s.avg_loss_calls_per_epoch =
      s.epochs > 0 ? static_cast<double>(s.loss_calls) / s.epochs
                   : static_cast<double>(s.loss_calls);
  s.stop_reason = result.trace.stop_reason;

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    write_trace_csv(config.out_dir + "/trace.csv", result.trace);
    std::ofstream out(config.out_dir + "/summary.json");
    out << summary_to_json(result.summary) << "\n";
  }
  return result;
}

void write_trace_csv(const std::string& path, const RunTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
  out << "epoch,loss,abs_error,rel_error,grad_norm,eta,beta,backtracks,resets,"
         "loss_calls_cum,grad_calls_cum\n";
  for (const auto& r : trace.records) {
    std::string resets;
    for (std::size_t i = 0; i < r.resets.size(); ++i) {
      if (i) resets += ';';
      resets += std::to_string(r.resets[i]);
    }
    out << r.epoch << ',' << fmt(r.loss) << ',' << fmt(r.abs_error) << ',' << fmt(r.rel_error)
        << ',' << fmt(r.grad_norm) << ',' << fmt(r.eta) << ',' << fmt(r.beta) << ','
        << r.backtracks << ',' << resets << ',' << r.loss_calls << ',' << r.gradient_calls
        << '\n';
  }
}

std::string summary_to_json(const RunSummary& s) {
  json j;
  j["model"] = s.model;
  j["optimizer"] = s.optimizer;
  j["n"] = s.n;
  j["d"] = s.d;
  j["seed"] = s.seed;
  j["e0"] = s.e0;
  j["final_energy"] = s.final_energy;
  j["final_abs_error"] = s.final_abs_error;
  j["final_rel_error"] = s.final_rel_error;
  j["final_fidelity"] = s.final_fidelity;
  if (s.epochs_to_chem_acc)
    j["epochs_to_chem_acc"] = *s.epochs_to_chem_acc;
  else
    j["epochs_to_chem_acc"] = nullptr;
  j["epochs"] = s.epochs;
  j["loss_calls"] = s.loss_calls;
  j["gradient_calls"] = s.gradient_calls;
  j["avg_loss_calls_per_epoch"] = s.avg_loss_calls_per_epoch;
  j["stop_reason"] = s.stop_reason;
  return j.dump(2);
}

SweepResult sweep(const RunConfig& config, const std::string& axis,
                  const std::vector<std::string>& values) {
  if (values.empty()) throw ConfigError("sweep: axis values must be non-empty");
  if (axis != "sizes" && axis != "seeds" && axis != "optimizers")
    throw ConfigError("sweep: axis must be sizes, seeds, or optimizers");

  struct CellSpec {
    std::string value;
    std::uint64_t seed;
  };
  std::vector<CellSpec> specs;
  for (const auto& value : values) {
    if (axis == "seeds") {
      specs.push_back({value, static_cast<std::uint64_t>(std::stoull(value))});
    } else {
      for (int i = 0; i < config.num_seeds; ++i)
        specs.push_back({value, config.seed + static_cast<std::uint64_t>(i)});
    }
  }

  SweepResult result;
  result.cells.resize(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) break;
      SweepCell& cell = result.cells[i];
      cell.axis_value = specs[i].value;
      cell.seed = specs[i].seed;
      RunConfig rc = config;
      rc.out_dir.clear();
      rc.seed = specs[i].seed;
      try {
        if (axis == "sizes") rc.n = std::stoi(specs[i].value);
        if (axis == "optimizers") rc.optimizer = optimizer_from_name(specs[i].value);
        cell.summary = run_gso(rc).summary;
        if (cell.summary.stop_reason == "aborted_line_search") {
          cell.failed = true;
          cell.error = "run aborted: line search failed";
        }
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
      }
    }
  };
  const int workers = std::min<int>(config.threads, static_cast<int>(specs.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::ostringstream csv;
  csv << "axis_value,seed,failed,epochs_to_chem_acc,final_abs_error,final_rel_error,epochs,"
         "loss_calls,gradient_calls,avg_loss_calls_per_epoch,stop_reason,error\n";
  for (const auto& c : result.cells) {
    csv << c.axis_value << ',' << c.seed << ',' << (c.failed ? 1 : 0) << ',';
    if (c.summary.epochs_to_chem_acc) csv << *c.summary.epochs_to_chem_acc;
    csv << ',' << fmt(c.summary.final_abs_error) << ',' << fmt(c.summary.final_rel_error) << ','
        << c.summary.epochs << ',' << c.summary.loss_calls << ',' << c.summary.gradient_calls
        << ',' << fmt(c.summary.avg_loss_calls_per_epoch) << ',' << c.summary.stop_reason << ','
        << c.error << '\n';
  }
  result.cells_csv = csv.str();

  json agg = json::array();
  for (const auto& value : values) {
    std::vector<double> epochs_acc, abs_errors, loss_per_epoch;
    int failed = 0, unreached = 0, total = 0;
    for (const auto& c : result.cells) {
      if (c.axis_value != value) continue;
      ++total;
      if (c.failed) {
        ++failed;
        continue;
      }
      abs_errors.push_back(c.summary.final_abs_error);
      loss_per_epoch.push_back(c.summary.avg_loss_calls_per_epoch);
      if (c.summary.epochs_to_chem_acc)
        epochs_acc.push_back(static_cast<double>(*c.summary.epochs_to_chem_acc));
      else
        ++unreached;
    }
    auto mean = [](const std::vector<double>& v) {
      if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    auto median = [](std::vector<double> v) {
      if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
      std::sort(v.begin(), v.end());
      const std::size_t m = v.size() / 2;
      return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
    };
    const double me = mean(epochs_acc);
    double se = std::numeric_limits<double>::quiet_NaN();
    if (epochs_acc.size() > 1) {
      double ss = 0.0;
      for (double x : epochs_acc) ss += (x - me) * (x - me);
      se = std::sqrt(ss / static_cast<double>(epochs_acc.size() - 1) /
                     static_cast<double>(epochs_acc.size()));
    }
    json row;
    row["axis_value"] = value;
    row["cells"] = total;
    row["failed"] = failed;
    row["unreached_chem_acc"] = unreached;
    row["mean_epochs_to_chem_acc"] = me;
    row["median_epochs_to_chem_acc"] = median(epochs_acc);
    row["ci95_epochs_low"] = std::isnan(se) ? json() : json(me - 1.96 * se);
    row["ci95_epochs_high"] = std::isnan(se) ? json() : json(me + 1.96 * se);
    row["mean_final_abs_error"] = mean(abs_errors);
    row["mean_loss_calls_per_epoch"] = mean(loss_per_epoch);
    agg.push_back(std::move(row));
  }
  result.aggregate_json = agg.dump(2);

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    std::ofstream(config.out_dir + "/cells.csv") << result.cells_csv;
    std::ofstream(config.out_dir + "/aggregate.json") << result.aggregate_json << "\n";
  }
  return result;
}

namespace {

Matrix random_symmetric(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = gauss(rng);
  Matrix sym = 0.5 * (a + a.transpose());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < i; ++j) sym(i, j) = sym(j, i);
  return sym;
}

struct SuiteReport {
  bool passed = true;
  json checks = json::array();
  void check(const std::string& name, bool ok, double value) {
    passed = passed && ok;
    checks.push_back({{"name", name}, {"passed", ok}, {"value", value}});
  }
};

SuiteReport validate_geometry() {
  SuiteReport rep;
  std::mt19937_64 rng(11);
  double worst_norm = 0.0, worst_iso = 0.0, worst_self = 0.0, worst_tan = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 2 + (trial % 15);
    const AmplitudeState x = sample_uniform_sphere(d, rng);
    const TangentVector v = project_tangent(x, sample_uniform_sphere(d, rng).coords());
    const TangentVector z1 = project_tangent(x, sample_uniform_sphere(d, rng).coords());
    const TangentVector z2 = project_tangent(x, sample_uniform_sphere(d, rng).coords());
    std::uniform_real_distribution<double> u01(0.0, 2.0);
    const double eta = u01(rng);
    if (v.norm() == 0.0) continue;
    const AmplitudeState y = exp_map(x, v, eta);
    worst_norm = std::max(worst_norm, std::abs(y.coords().norm() - 1.0));
    const TangentVector t1 = parallel_transport(x, v, z1, eta);
    const TangentVector t2 = parallel_transport(x, v, z2, eta);
    worst_iso = std::max(worst_iso, std::abs(t1.components().dot(t2.components()) -
                                             z1.components().dot(z2.components())));
    worst_tan = std::max(worst_tan, std::abs(y.coords().dot(t1.components())));
    const TangentVector tv = parallel_transport(x, v, v, eta);
    const double a = eta * v.norm();
    const Vector self =
        std::cos(a) * v.components() - std::sin(a) * v.norm() * x.coords();
    worst_self = std::max(worst_self, (tv.components() - self).cwiseAbs().maxCoeff());
  }
  rep.check("exp_map_unit_norm<=1e-12", worst_norm <= 1e-12, worst_norm);
  rep.check("transport_isometry<=1e-10", worst_iso <= 1e-10, worst_iso);
  rep.check("transport_tangency<=1e-10", worst_tan <= 1e-10, worst_tan);
  rep.check("self_transport_closed_form<=1e-12", worst_self <= 1e-12, worst_self);
  return rep;
}

SuiteReport validate_gradients() {
  SuiteReport rep;
  std::mt19937_64 rng(12);
  double worst_pair = 0.0, worst_nat = 0.0;
  bool counter_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 4 + (trial % 9);
    SubspaceBasis basis;
    basis.n = 0;
    const SubspaceHamiltonian H(basis, random_symmetric(d, rng));
    const AngleVector theta = theta_from_x(sample_uniform_sphere(d, rng));
    CallCounters counters;
    const Vector gs = grad_theta_structured(theta, H, counters);
    counter_ok = counter_ok && counters.loss_calls == 2 * static_cast<std::uint64_t>(d - 1) + 1;
    const Vector gc = grad_theta_chain(theta, H);
    const Vector gf = fd_gradient_oracle(theta, H, 1e-6);
    const double scale = std::max(1.0, gc.norm());
    worst_pair = std::max({worst_pair, (gs - gc).norm() / scale, (gc - gf).norm() / scale,
                           (gs - gf).norm() / scale});
    const TangentVector nat = natural_gradient_x(theta, gc);
    const AmplitudeState x = x_from_theta(theta);
    worst_nat = std::max(worst_nat,
                         (nat.components() + grad_x(x, H)).cwiseAbs().maxCoeff());
  }
  rep.check("route_equivalence<=1e-6", worst_pair <= 1e-6, worst_pair);
  rep.check("natural_gradient_identity<=1e-10", worst_nat <= 1e-10, worst_nat);
  rep.check("structured_counter_law", counter_ok, counter_ok ? 1.0 : 0.0);
  return rep;
}

SuiteReport validate_variance() {
  SuiteReport rep;
  std::mt19937_64 rng(13);
  SubspaceBasis basis;
  basis.n = 0;
  const SubspaceHamiltonian H(basis, random_symmetric(4, rng));
  const VarianceReport vr = mc_variances(H, 1000000, rng);
  const double z_loss =
      std::abs(vr.mc_var_loss - vr.closed_form_var_loss) / vr.mc_var_loss_se;
  double z_grad = 0.0;
  for (Eigen::Index j = 0; j < 4; ++j) {
    z_grad = std::max(z_grad, std::abs(vr.mc_var_grad[j] - vr.closed_form_var_grad[j]) /
                                  vr.mc_var_grad_se[j]);
  }
  rep.check("var_loss_within_3se", z_loss <= 3.0, z_loss);
  rep.check("var_grad_within_3se", z_grad <= 3.0, z_grad);
  return rep;
}

SuiteReport validate_qite() {
  SuiteReport rep;
  std::mt19937_64 rng(14);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 2 + (trial % 15);
    SubspaceBasis basis;
    basis.n = 0;
    const SubspaceHamiltonian H(basis, random_symmetric(d, rng));
    const AmplitudeState x = sample_uniform_sphere(d, rng);
    for (double eta : {0.01, 0.1, 1.0})
      worst = std::max(worst, qite_equivalence_check(x, H, eta));
  }
  rep.check("qite_deviation<=1e-10", worst <= 1e-10, worst);
  return rep;
}

}  // namespace

ValidationResult validate(const std::string& suite) {
  json report;
  bool passed = true;
  auto run_suite = [&](const std::string& name, SuiteReport (*fn)()) {
    const SuiteReport r = fn();
    passed = passed && r.passed;
    report[name] = {{"passed", r.passed}, {"checks", r.checks}};
  };
  if (suite == "geometry" || suite == "all") run_suite("geometry", validate_geometry);
  if (suite == "gradients" || suite == "all") run_suite("gradients", validate_gradients);
  if (suite == "variance" || suite == "all") run_suite("variance", validate_variance);
  if (suite == "qite" || suite == "all") run_suite("qite", validate_qite);
  if (report.empty()) throw ConfigError("unknown validation suite '" + suite + "'");
  report["passed"] = passed;
  return ValidationResult{passed, report.dump(2)};
}

}  // namespace gso
