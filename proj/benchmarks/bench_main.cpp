#include <benchmark/benchmark.h>

#include <random>

#include "gso/gradients.hpp"
#include "gso/optimize.hpp"
#include "gso/runio.hpp"

using namespace gso;

namespace {

Vector random_vec(Eigen::Index d, std::mt19937_64& gen) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = gauss(gen);
  return v;
}

SubspaceHamiltonian random_hamiltonian(Eigen::Index d, std::mt19937_64& gen) {
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = random_vec(1, gen)[0];
  Matrix sym = 0.5 * (a + a.transpose());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < i; ++j) sym(i, j) = sym(j, i);
  return SubspaceHamiltonian(SubspaceBasis{}, std::move(sym));
}

void bm_exp_map(benchmark::State& state) {
  std::mt19937_64 gen(1);
  const Eigen::Index d = state.range(0);
  const AmplitudeState x = AmplitudeState::normalized(random_vec(d, gen));
  const TangentVector v = project_tangent(x, random_vec(d, gen));
  for (auto _ : state) benchmark::DoNotOptimize(exp_map(x, v, 0.3));
}
BENCHMARK(bm_exp_map)->Arg(16)->Arg(64)->Arg(256);

void bm_parallel_transport(benchmark::State& state) {
  std::mt19937_64 gen(2);
  const Eigen::Index d = state.range(0);
  const AmplitudeState x = AmplitudeState::normalized(random_vec(d, gen));
  const TangentVector v = project_tangent(x, random_vec(d, gen));
  const TangentVector z = project_tangent(x, random_vec(d, gen));
  for (auto _ : state) benchmark::DoNotOptimize(parallel_transport(x, v, z, 0.3));
}
BENCHMARK(bm_parallel_transport)->Arg(16)->Arg(64)->Arg(256);

void bm_jacobian_transpose_apply(benchmark::State& state) {
  std::mt19937_64 gen(3);
  const Eigen::Index d = state.range(0);
  const AngleVector theta = theta_from_x(AmplitudeState::normalized(random_vec(d, gen)));
  const Vector g = random_vec(d, gen);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_transpose_apply(theta, g));
}
BENCHMARK(bm_jacobian_transpose_apply)->Arg(16)->Arg(64)->Arg(256);

void bm_structured_gradient(benchmark::State& state) {
  std::mt19937_64 gen(4);
  const Eigen::Index d = state.range(0);
  const SubspaceHamiltonian H = random_hamiltonian(d, gen);
  const AngleVector theta = theta_from_x(AmplitudeState::normalized(random_vec(d, gen)));
  for (auto _ : state) {
    CallCounters counters;
    benchmark::DoNotOptimize(grad_theta_structured(theta, H, counters));
  }
}
BENCHMARK(bm_structured_gradient)->Arg(16)->Arg(64);

void bm_egt_cg_epoch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto [h, basis] = build_xxz(n, 0.5);
  const SubspaceHamiltonian H = project_pauli(h, basis);
  const double e0 = exact_ground(H).e0;
  CGParams params;
  params.max_epochs = 5;
  params.halt_after_acc = 1000;
  const AmplitudeState x0 = haar_state(H.dim(), 11);
  for (auto _ : state) benchmark::DoNotOptimize(egt_cg_run(H, x0, params, e0));
}
BENCHMARK(bm_egt_cg_epoch)->Arg(6)->Arg(8)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
