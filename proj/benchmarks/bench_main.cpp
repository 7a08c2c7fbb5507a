// Microbenchmarks for the hot paths: the dense eigensolver, assemblage
// construction, witness evaluation and the grid search.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "incompat/sampling.hpp"
#include "incompat/scenarios.hpp"
#include "incompat/witness.hpp"

using namespace incompat;

namespace {

HermitianMatrix random_hermitian(int dim, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  return HermitianMatrix(0.5 * (g + adjoint(g)));
}

void bm_hermitian_eig(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const HermitianMatrix a = random_hermitian(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(a));
}

void bm_psd_sqrt(benchmark::State& state) {
  std::mt19937_64 rng(12);
  const DensityMatrix rho = random_density(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(psd_sqrt(rho.hermitian()));
}

void bm_steering_cell(benchmark::State& state) {
  const WitnessFunctional el = make_functional("l2", 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(steering_cell_signed(M_PI / 4.0, 0.1, el));
}

void bm_violation_report(benchmark::State& state) {
  const WitnessFunctional wy = make_functional("wysi", 2);
  const StateAssemblage s =
      conditional_assemblage(pure_state_family(0.8), noisy_pauli_assemblage(0.15), 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(violation(wy, s));
}

void bm_seo(benchmark::State& state) {
  ComplexMatrix rho(2, 2);
  rho(0, 0) = 0.65;
  rho(1, 1) = 0.35;
  rho(0, 1) = rho(1, 0) = 0.2;
  const StateAssemblage s = embed_measurement(noisy_pauli_assemblage(0.2), DensityMatrix(rho));
  for (auto _ : state) benchmark::DoNotOptimize(seo(s));
}

void bm_measurement_search(benchmark::State& state) {
  const WitnessFunctional el = make_functional("l2", 2);
  const MeasurementAssemblage m = noisy_pauli_assemblage(0.1);
  OptimizerConfig cfg;
  cfg.grid_resolution = static_cast<int>(state.range(0));
  cfg.nm_max_iter = 60;
  for (auto _ : state) benchmark::DoNotOptimize(measurement_incompatibility(el, m, cfg));
}

BENCHMARK(bm_hermitian_eig)->Arg(2)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(bm_psd_sqrt)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(bm_steering_cell);
BENCHMARK(bm_violation_report);
BENCHMARK(bm_seo);
BENCHMARK(bm_measurement_search)->Arg(3)->Arg(5)->Arg(7);

} // namespace

BENCHMARK_MAIN();
