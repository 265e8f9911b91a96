#include <benchmark/benchmark.h>

#include "knudsen/philox.hpp"

static void BM_PhiloxBlock(benchmark::State& state) {
  std::uint32_t ctr[4] = {0, 0, 0, 0};
  for (auto _ : state) {
    ++ctr[0];
    benchmark::DoNotOptimize(knudsen::Philox4x32::generate(0x1234abcd, ctr));
  }
  state.SetBytesProcessed(state.iterations() * 16);
}
BENCHMARK(BM_PhiloxBlock);

static void BM_CounterRngUniform(benchmark::State& state) {
  knudsen::CounterRng rng(42, 7, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.uniform());
  }
}
BENCHMARK(BM_CounterRngUniform);

static void BM_CounterRngNormal(benchmark::State& state) {
  knudsen::CounterRng rng(42, 7, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.normal());
  }
}
BENCHMARK(BM_CounterRngNormal);
