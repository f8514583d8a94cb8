#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fuzzeeg/entropy.hpp"
#include "fuzzeeg/tqwt.hpp"

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

void BM_FuEnLength(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 1);
  const fuzzeeg::EntropyParams p;
  for (auto _ : state) benchmark::DoNotOptimize(fuzzeeg::fu_en(x, p).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FuEnLength)->RangeMultiplier(2)->Range(250, 4000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Kernel(benchmark::State& state) {
  const auto k = fuzzeeg::all_kernels()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(std::string(fuzzeeg::kernel_id(k)));
  const auto x = noise(868, 2);
  const fuzzeeg::EntropyParams p;
  for (auto _ : state) benchmark::DoNotOptimize(fuzzeeg::compute_kernel(k, x, p).value);
}
BENCHMARK(BM_Kernel)->DenseRange(0, fuzzeeg::kKernelCount - 1)->Unit(benchmark::kMillisecond);

void BM_TqwtDecompose(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 3);
  const fuzzeeg::TqwtParams p;
  for (auto _ : state) benchmark::DoNotOptimize(fuzzeeg::decompose(x, p).bands.size());
}
BENCHMARK(BM_TqwtDecompose)->Arg(868)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_TqwtRoundTrip(benchmark::State& state) {
  const auto x = noise(868, 4);
  const fuzzeeg::TqwtParams p;
  for (auto _ : state) benchmark::DoNotOptimize(fuzzeeg::synthesize(fuzzeeg::decompose(x, p)).front());
}
BENCHMARK(BM_TqwtRoundTrip)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
