#include <benchmark/benchmark.h>

#include <random>

#include "refint/estimate.hpp"
#include "refint/outlier.hpp"
#include "refint/pipeline.hpp"
#include "refint/synth.hpp"
#include "refint/transform.hpp"

namespace {

std::vector<double> lognormal(std::size_t n) {
  std::mt19937_64 rng(42);
  std::lognormal_distribution<double> d(0.5, 0.8);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

void BM_BiweightInterval(benchmark::State& state) {
  const auto x = lognormal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(refint::estimate::robust_interval(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BiweightInterval)->RangeMultiplier(4)->Range(64, 65536)->Complexity();

void BM_NonparametricInterval(benchmark::State& state) {
  const auto x = lognormal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(refint::estimate::nonparametric_interval(x));
}
BENCHMARK(BM_NonparametricInterval)->RangeMultiplier(4)->Range(64, 65536);

void BM_BoxCoxFit(benchmark::State& state) {
  const auto x = lognormal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(refint::transform::boxcox_fit(x, false));
}
BENCHMARK(BM_BoxCoxFit)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond);

void BM_BlockDixonReed(benchmark::State& state) {
  const auto x = lognormal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(refint::outlier::block_dr_eliminate(x));
}
BENCHMARK(BM_BlockDixonReed)->RangeMultiplier(4)->Range(64, 65536);

void BM_RunMatrix(benchmark::State& state) {
  const auto cohort = refint::synth::generate(refint::synth::iga_profile(), 1,
                                              static_cast<std::size_t>(state.range(0)));
  const refint::RunConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(refint::run_matrix(cohort, config));
}
BENCHMARK(BM_RunMatrix)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
