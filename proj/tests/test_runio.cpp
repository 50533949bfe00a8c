#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gso/runio.hpp"

using namespace gso;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("optimizer names roundtrip") {
  for (auto kind : {OptimizerKind::EGT, OptimizerKind::EGTCG, OptimizerKind::QNG1,
                    OptimizerKind::QNG2, OptimizerKind::FlatCG, OptimizerKind::Adam}) {
    CHECK(optimizer_from_name(optimizer_name(kind)) == kind);
  }
  CHECK_THROWS_AS(optimizer_from_name("sgd"), ConfigError);
}

TEST_CASE("haar_state is seeded and uniform-norm") {
  const AmplitudeState a = haar_state(10, 7);
  const AmplitudeState b = haar_state(10, 7);
  const AmplitudeState c = haar_state(10, 8);
  CHECK((a.coords() - b.coords()).norm() == 0.0);
  CHECK((a.coords() - c.coords()).norm() > 1e-3);
}

TEST_CASE("run_gso on XXZ n=4 reaches chemical accuracy quickly") {
  RunConfig config;
  config.model = ModelKind::XXZ;
  config.n = 4;
  config.delta = 0.5;
  config.optimizer = OptimizerKind::EGTCG;
  config.init = InitKind::Haar;
  config.seed = 7;
  const RunResult result = run_gso(config);
  REQUIRE(result.summary.epochs_to_chem_acc.has_value());
  CHECK(*result.summary.epochs_to_chem_acc <= 20);
  CHECK(result.summary.final_rel_error <= 1.6e-3);
  CHECK(result.summary.d == 6);
  CHECK(result.summary.final_fidelity > 0.99);
}

TEST_CASE("run_gso echoes the TFIM dimension") {
  RunConfig config;
  config.model = ModelKind::TFIM;
  config.n = 9;
  config.field = 0.033;
  config.k = 3;
  config.init = InitKind::Warm;
  config.warm_alpha = 0.9;
  config.params.max_epochs = 5;
  const RunResult result = run_gso(config);
  CHECK(result.summary.d == 130);
}

TEST_CASE("config validation rejects bad inputs before computation") {
  RunConfig config;
  config.model = ModelKind::XXZ;
  config.n = 5;
  CHECK_THROWS_AS(run_gso(config), ConfigError);
  config.n = 4;
  config.init = InitKind::Warm;
  config.warm_alpha = 1.5;
  CHECK_THROWS_AS(run_gso(config), ConfigError);
  config.warm_alpha = 0.9;
  config.params.chem_acc = -1.0;
  CHECK_THROWS_AS(run_gso(config), ConfigError);
  config.params.chem_acc = 1.6e-3;
  config.threads = 0;
  CHECK_THROWS_AS(run_gso(config), ConfigError);
}

TEST_CASE("lone-Y pauli file surfaces NotRealHamiltonian") {
  const auto path = std::filesystem::temp_directory_path() / "gso_loney.json";
  std::ofstream(path) << R"({"n": 2, "terms": [{"coeff": 1.0, "pauli": "YI"}],
                             "subspace": {"kind": "hw_le", "k": 2}})";
  RunConfig config;
  config.model = ModelKind::PauliFile;
  config.hamiltonian_file = path.string();
  CHECK_THROWS_AS(run_gso(config), NotRealHamiltonian);
  std::filesystem::remove(path);
}

TEST_CASE("trace CSV is deterministic and re-auditable") {
  RunConfig config;
  config.model = ModelKind::XXZ;
  config.n = 4;
  config.optimizer = OptimizerKind::EGTCG;
  config.init = InitKind::Haar;
  config.seed = 3;
  config.out_dir = temp_dir("gso_det_a");
  run_gso(config);
  const std::string first = slurp(config.out_dir + "/trace.csv");
  config.out_dir = temp_dir("gso_det_b");
  run_gso(config);
  CHECK(first == slurp(config.out_dir + "/trace.csv"));
  CHECK(first.substr(0, 5) == "epoch");
  std::filesystem::remove_all(temp_dir("gso_det_a"));
  std::filesystem::remove_all(temp_dir("gso_det_b"));
}

TEST_CASE("single-cell sweep equals run_gso") {
  RunConfig config;
  config.model = ModelKind::XXZ;
  config.n = 4;
  config.optimizer = OptimizerKind::EGTCG;
  config.init = InitKind::Haar;
  config.seed = 11;
  config.num_seeds = 1;
  const SweepResult s = sweep(config, "seeds", {"11"});
  REQUIRE(s.cells.size() == 1);
  CHECK_FALSE(s.cells[0].failed);
  const RunResult direct = run_gso(config);
  CHECK(s.cells[0].summary.final_energy == direct.summary.final_energy);
  CHECK(s.cells[0].summary.loss_calls == direct.summary.loss_calls);
}

TEST_CASE("parallel sweep matches serial execution") {
  RunConfig config;
  config.model = ModelKind::XXZ;
  config.n = 4;
  config.optimizer = OptimizerKind::EGTCG;
  config.init = InitKind::Haar;
  config.seed = 0;
  config.num_seeds = 6;
  config.threads = 1;
  const SweepResult serial = sweep(config, "optimizers", {"egt-cg", "adam"});
  config.threads = 4;
  const SweepResult parallel = sweep(config, "optimizers", {"egt-cg", "adam"});
  CHECK(serial.cells_csv == parallel.cells_csv);
  CHECK(serial.aggregate_json == parallel.aggregate_json);
}

TEST_CASE("failed sweep cells are recorded without stopping the grid") {
  RunConfig config;
  config.model = ModelKind::XXZ;
  config.n = 4;
  config.init = InitKind::Haar;
  config.num_seeds = 1;
  const SweepResult s = sweep(config, "sizes", {"4", "5"});
  REQUIRE(s.cells.size() == 2);
  CHECK_FALSE(s.cells[0].failed);
  CHECK(s.cells[1].failed);
  CHECK(!s.cells[1].error.empty());
}

TEST_CASE("validation suites pass on a clean build") {
  CHECK(validate("geometry").passed);
  CHECK(validate("gradients").passed);
  CHECK(validate("qite").passed);
  CHECK_THROWS_AS(validate("nonsense"), ConfigError);
}
