#include <benchmark/benchmark.h>

#include <cstdint>

#include "perpetua/diagnostics.hpp"
#include "perpetua/simulate.hpp"

using namespace perpetua;

namespace {

void BM_run_trajectory(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const RunConfig cfg{PairLaw::gaussian_entries(d, 0.3, 1.0),
                      VectorLaw::zero(d), 1024, 1, false, 42};
  std::uint64_t stream = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trajectory(cfg, stream++));
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_run_trajectory)->Arg(2)->Arg(4)->Arg(8);

// suffix statistics replay every past product: O(T^2) per replication
void BM_run_trajectory_suffix(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  const RunConfig cfg{PairLaw::gaussian_entries(2, 0.3, 1.0),
                      VectorLaw::zero(2), T, 1, true, 42};
  std::uint64_t stream = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trajectory(cfg, stream++));
  }
}
BENCHMARK(BM_run_trajectory_suffix)->Arg(64)->Arg(256)->Arg(1024);

void BM_run_ensemble(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  const RunConfig cfg{PairLaw::gaussian_entries(3, 0.3, 1.0),
                      VectorLaw::zero(3), 256, 32, true, 42};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_ensemble(cfg, threads));
  }
}
BENCHMARK(BM_run_ensemble)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

void BM_estimate_lyapunov(benchmark::State& state) {
  const PairLaw law = PairLaw::gaussian_entries(3, 0.3, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_lyapunov(law, 1000, 16, 42, 4));
  }
}
BENCHMARK(BM_estimate_lyapunov)->UseRealTime();

}  // namespace
