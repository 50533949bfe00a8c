// gsopt: ground-state optimization on the hypersphere.
//   gsopt gso      — one optimization run, CSV trace + JSON summary
//   gsopt sweep    — grids over sizes / seeds / optimizers
//   gsopt validate — fixed-seed property suites
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gso/runio.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunAbort = 1;
constexpr int kExitConfig = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GSO_SEED")) return std::stoull(env);
  return 0;
}

void parse_init(const std::string& spec, gso::RunConfig& config) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "warm") {
    config.init = gso::InitKind::Warm;
    if (!arg.empty()) config.warm_alpha = std::stod(arg);
  } else if (kind == "haar") {
    config.init = gso::InitKind::Haar;
    if (!arg.empty()) config.seed = std::stoull(arg);
  } else if (kind == "file") {
    config.init = gso::InitKind::ExplicitFile;
    config.init_file = arg;
  } else {
    throw gso::ConfigError("--init must be warm:<alpha>, haar:<seed>, or file:<path>");
  }
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void add_common_flags(CLI::App* cmd, gso::RunConfig& config, std::string& model,
                      std::string& optimizer, std::string& init, std::string& chem_mode) {
  cmd->add_option("--model", model, "xxz | tfim | pauli-file");
  cmd->add_option("--n", config.n, "chain length (number of qubits)");
  cmd->add_option("--delta", config.delta, "XXZ anisotropy");
  cmd->add_option("--field", config.field, "TFIM transverse field");
  cmd->add_option("--k", config.k, "subspace Hamming weight (model default if omitted)");
  cmd->add_option("--hamiltonian", config.hamiltonian_file, "Pauli-sum JSON file");
  cmd->add_option("--optimizer", optimizer, "egt | egt-cg | qng1 | qng2 | flat-cg | adam");
  cmd->add_option("--init", init, "warm:<alpha> | haar:<seed> | file:<path>");
  cmd->add_option("--chem-acc", config.params.chem_acc, "chemical-accuracy threshold");
  cmd->add_option("--chem-mode", chem_mode, "abs | rel");
  cmd->add_option("--seeds", config.num_seeds, "seeds per sweep cell");
  cmd->add_option("--out", config.out_dir, "output directory");
  cmd->add_option("--threads", config.threads, "parallel sweep workers");
  cmd->add_flag("--golden-section", config.params.golden_section,
                "golden-section bracketing before backtracking");
  cmd->add_option("--epochs-max", config.params.max_epochs, "epoch limit");
}

void finish_config(gso::RunConfig& config, const std::string& model,
                   const std::string& optimizer, const std::string& init,
                   const std::string& chem_mode) {
  if (model == "xxz") {
    config.model = gso::ModelKind::XXZ;
  } else if (model == "tfim") {
    config.model = gso::ModelKind::TFIM;
  } else if (model == "pauli-file") {
    config.model = gso::ModelKind::PauliFile;
  } else {
    throw gso::ConfigError("--model must be xxz, tfim, or pauli-file");
  }
  config.optimizer = gso::optimizer_from_name(optimizer);
  parse_init(init, config);
  if (chem_mode == "abs") {
    config.params.chem_mode_rel = false;
  } else if (chem_mode == "rel") {
    config.params.chem_mode_rel = true;
  } else {
    throw gso::ConfigError("--chem-mode must be abs or rel");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-geodesic-transport ground-state optimizer"};
  app.require_subcommand(1);

  gso::RunConfig config;
  config.seed = default_seed();
  std::string model = "xxz", optimizer = "egt-cg", init = "haar:" + std::to_string(config.seed);
  std::string chem_mode = "abs";

  CLI::App* gso_cmd = app.add_subcommand("gso", "run one optimization");
  add_common_flags(gso_cmd, config, model, optimizer, init, chem_mode);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a grid of optimizations");
  add_common_flags(sweep_cmd, config, model, optimizer, init, chem_mode);
  std::string axis = "seeds", values_csv;
  sweep_cmd->add_option("--axis", axis, "sizes | seeds | optimizers");
  sweep_cmd->add_option("--values", values_csv, "comma-separated axis values")->required();

  CLI::App* validate_cmd = app.add_subcommand("validate", "run the property suites");
  std::string suite = "all";
  validate_cmd->add_option("suite", suite, "geometry | gradients | variance | qite | all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gso_cmd->parsed()) {
      finish_config(config, model, optimizer, init, chem_mode);
      const gso::RunResult result = run_gso(config);
      std::cout << gso::summary_to_json(result.summary) << "\n";
      return result.summary.stop_reason == "aborted_line_search" ? kExitRunAbort : kExitOk;
    }
    if (sweep_cmd->parsed()) {
      finish_config(config, model, optimizer, init, chem_mode);
      const gso::SweepResult result = sweep(config, axis, split_csv(values_csv));
      std::cout << result.aggregate_json << "\n";
      for (const auto& cell : result.cells) {
        if (cell.failed) return kExitRunAbort;
      }
      return kExitOk;
    }
    const gso::ValidationResult result = gso::validate(suite);
    std::cout << result.report_json << "\n";
    return result.passed ? kExitOk : kExitRunAbort;
  } catch (const gso::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gso::NotRealHamiltonian& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "run aborted: " << e.what() << "\n";
    return kExitRunAbort;
  }
}
