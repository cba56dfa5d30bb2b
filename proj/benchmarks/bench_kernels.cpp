#include <benchmark/benchmark.h>

#include "qachaos/evolution.hpp"
#include "qachaos/model.hpp"
#include "qachaos/pauli.hpp"
#include "qachaos/spectral.hpp"
#include "qachaos/states.hpp"

using namespace qachaos;

// One dense step propagator of H(s) in the + sector.
static void BM_step_propagator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HamiltonianSpec spec = HamiltonianSpec::nearest_neighbor(n);
  const ProjectedHamiltonian model(spec, parity_sector(spec, 1));
  const RealMatrix h = model.at(0.4);
  for (auto _ : state) benchmark::DoNotOptimize(step_propagator(h, 0.5));
  state.counters["dim"] = static_cast<double>(h.rows());
}
BENCHMARK(BM_step_propagator)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

static void BM_sector_mlsr(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HamiltonianSpec spec = HamiltonianSpec::nearest_neighbor(n);
  const ProjectedHamiltonian model(spec, parity_sector(spec, 1));
  const RealMatrix h = model.at(0.35);
  for (auto _ : state) benchmark::DoNotOptimize(mlsr_hermitian(h));
}
BENCHMARK(BM_sector_mlsr)->DenseRange(8, 12, 2)->Unit(benchmark::kMillisecond);

static void BM_pauli_decomposition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix u = step_propagator(interpolated_hamiltonian(HamiltonianSpec::nearest_neighbor(n), 0.5), 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(pauli_decomposition(u, n));
  state.counters["strings"] = static_cast<double>(std::size_t{1} << (2 * n));
}
BENCHMARK(BM_pauli_decomposition)->DenseRange(3, 7)->Unit(benchmark::kMillisecond);

// Matrix-free Taylor step on a block of full-space states.
static void BM_exact_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int columns = static_cast<int>(state.range(1));
  const HamiltonianAction h(HamiltonianSpec::nearest_neighbor(n));
  Matrix states(h.dim(), columns);
  for (int c = 0; c < columns; ++c) {
    states.col(c) = spin_coherent_state(1.5707963267948966, 0.1 * c, n).amplitudes;
  }
  for (auto _ : state) {
    exact_step(h, 0.5, 0.05, states);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_exact_step)->ArgsProduct({{8, 10, 12}, {1, 21}})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
