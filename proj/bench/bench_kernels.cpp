// Serial reference kernels against the OpenMP ones.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mtqite/kernels.hpp"

namespace {

using mtqite::kernels::cplx;
using mtqite::kernels::PauliMasks;

std::vector<cplx> random_state(int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<cplx> v(std::size_t{1} << n);
  for (auto& a : v) a = {g(rng), g(rng)};
  return v;
}

PauliMasks mixed_string(int n) {
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  return {all & 0x5555555555555555ULL, all & 0x3333333333333333ULL, 0};
}

template <bool Parallel>
void BM_Rotate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto amps = random_state(n);
  const auto p = mixed_string(n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      mtqite::kernels::omp::rotate(amps, p, 0.01);
    } else {
      mtqite::kernels::serial::rotate(amps, p, 0.01);
    }
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <bool Parallel>
void BM_Expectation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto amps = random_state(n);
  const auto p = mixed_string(n);
  for (auto _ : state) {
    cplx v = Parallel ? mtqite::kernels::omp::expectation(amps, p) : mtqite::kernels::serial::expectation(amps, p);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

}  // namespace

BENCHMARK(BM_Rotate<false>)->Arg(8)->Arg(14)->Arg(18)->Arg(20);
BENCHMARK(BM_Rotate<true>)->Arg(8)->Arg(14)->Arg(18)->Arg(20);
BENCHMARK(BM_Expectation<false>)->Arg(8)->Arg(14)->Arg(18)->Arg(20);
BENCHMARK(BM_Expectation<true>)->Arg(8)->Arg(14)->Arg(18)->Arg(20);

BENCHMARK_MAIN();
