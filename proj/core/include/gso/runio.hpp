#ifndef GSO_RUNIO_HPP
#define GSO_RUNIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gso/optimize.hpp"

namespace gso {

enum class ModelKind { XXZ, TFIM, PauliFile };
enum class OptimizerKind { EGT, EGTCG, QNG1, QNG2, FlatCG, Adam };
enum class InitKind { Warm, Haar, ExplicitFile };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ModelKind model = ModelKind::XXZ;
  int n = 4;
  double delta = 0.5;   // XXZ anisotropy
  double field = 0.033; // TFIM transverse field
  int k = -1;           // subspace Hamming weight; -1 = model default
  std::string hamiltonian_file;

  OptimizerKind optimizer = OptimizerKind::EGTCG;
  CGParams params;
  std::vector<double> adam_eta_grid = {0.001, 0.005, 0.01, 0.05, 0.1, 0.5};

  InitKind init = InitKind::Haar;
  double warm_alpha = 0.9;
  std::uint64_t seed = 0;
  std::string init_file;

  int num_seeds = 1;
  std::string out_dir;
  int threads = 1;
};

std::string optimizer_name(OptimizerKind kind);
OptimizerKind optimizer_from_name(const std::string& name);

/// Standard-normal d-vector, normalized: uniform on the sphere, seeded.
AmplitudeState haar_state(Eigen::Index d, std::uint64_t seed);

struct RunSummary {
  std::string model;
  std::string optimizer;
  int n = 0;
  Eigen::Index d = 0;
  std::uint64_t seed = 0;
  double e0 = 0.0;
  double final_energy = 0.0;
  double final_abs_error = 0.0;
  double final_rel_error = 0.0;
  double final_fidelity = 0.0;
  std::optional<int> epochs_to_chem_acc;
  int epochs = 0;
  std::uint64_t loss_calls = 0;
  std::uint64_t gradient_calls = 0;
  double avg_loss_calls_per_epoch = 0.0;
  std::string stop_reason;
};

struct RunResult {
  RunTrace trace;
  RunSummary summary;
};

/// Builds the configured Hamiltonian, solves the ground truth, runs the
/// optimizer, and (when out_dir is set) writes the per-epoch CSV and JSON
/// summary. Throws ConfigError on invalid configs before any computation.
RunResult run_gso(const RunConfig& config);

void write_trace_csv(const std::string& path, const RunTrace& trace);
std::string summary_to_json(const RunSummary& summary);

struct SweepCell {
  std::string axis_value;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  RunSummary summary;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::string cells_csv;
  std::string aggregate_json;
};

/// Runs the grid over one axis ("sizes", "seeds", or "optimizers"); each
/// axis value is repeated for config.num_seeds seeds (seed axis excepted).
/// Cells may run in parallel; aborted cells are recorded and skipped.
SweepResult sweep(const RunConfig& config, const std::string& axis,
                  const std::vector<std::string>& values);

struct ValidationResult {
  bool passed = false;
  std::string report_json;
};

/// Fixed-seed property suites: "geometry", "gradients", "variance", "qite",
/// or "all".
ValidationResult validate(const std::string& suite);

}  // namespace gso

#endif
