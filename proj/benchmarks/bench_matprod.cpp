#include <benchmark/benchmark.h>

#include <random>

#include "perpetua/scaled.hpp"
#include "perpetua/suffix.hpp"

using namespace perpetua;

namespace {

SquareMatrix random_matrix(std::mt19937_64& g, std::size_t d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SquareMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = u(g);
  return m;
}

void BM_spectral_norm(benchmark::State& state) {
  std::mt19937_64 g(1);
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  SquareMatrix m = random_matrix(g, d);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_norm(m));
}
BENCHMARK(BM_spectral_norm)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_product_extend(benchmark::State& state) {
  std::mt19937_64 g(2);
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  std::vector<SquareMatrix> ms;
  for (int i = 0; i < 64; ++i) ms.push_back(random_matrix(g, d));
  std::size_t i = 0;
  ScaledProduct p(d);
  for (auto _ : state) {
    p.extend(ms[i++ & 63]);
    benchmark::DoNotOptimize(p.log_scale());
  }
}
BENCHMARK(BM_product_extend)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_suffix_tracker_push(benchmark::State& state) {
  std::mt19937_64 g(3);
  const std::size_t d = 2;
  std::vector<SquareMatrix> ms;
  for (int i = 0; i < 512; ++i) ms.push_back(random_matrix(g, d));
  for (auto _ : state) {
    state.PauseTiming();
    SuffixTracker tr(d);
    state.ResumeTiming();
    for (const auto& m : ms) tr.push(m);
    benchmark::DoNotOptimize(tr.min_norm_log());
  }
}
BENCHMARK(BM_suffix_tracker_push);

}  // namespace

BENCHMARK_MAIN();
