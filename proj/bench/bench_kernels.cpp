// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "su11/critical.hpp"
#include "su11/fock.hpp"

using namespace su11;

namespace {

fock::FockDensityMatrix bench_density(int n_max) {
  return fock::to_density(fock::build_state_unchecked({1.0, 0.0, 0.4, 0.0}, {0.6, 0.0}, n_max));
}

void BM_LossChannel(benchmark::State& state, Execution exec) {
  const auto rho = bench_density(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fock::loss_channel(rho, 0.9, 0.8, exec));
}

void BM_DephaseChannel(benchmark::State& state, Execution exec) {
  const auto rho = bench_density(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fock::dephase_channel(rho, 0.05, 0.02, exec));
}

void BM_Surface(benchmark::State& state, Execution exec) {
  const auto n = static_cast<int>(state.range(0));
  const auto etas = Grid{0.5, 1.0, n}.values();
  const auto betas = Grid{0.0, 0.1, n}.values();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sensitivity_surface(alpha_locked_input(1.0), {2.0, 0.0}, etas, betas, exec));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_LossChannel, serial, Execution::kSerial)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_LossChannel, parallel, Execution::kParallel)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_DephaseChannel, serial, Execution::kSerial)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_DephaseChannel, parallel, Execution::kParallel)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Surface, serial, Execution::kSerial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Surface, parallel, Execution::kParallel)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
