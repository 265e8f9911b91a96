#include <benchmark/benchmark.h>

#include "knudsen/bessel.hpp"

// Covers both evaluation regimes: power series below the cutoff, scaled
// asymptotic beyond it.
static void BM_BesselI0Scaled(benchmark::State& state) {
  const double y = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(knudsen::bessel_i0_scaled(y));
  }
}
BENCHMARK(BM_BesselI0Scaled)->Arg(1)->Arg(10)->Arg(100)->Arg(10000);

static void BM_LogBesselI0(benchmark::State& state) {
  const double y = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(knudsen::log_bessel_i0(y));
  }
}
BENCHMARK(BM_LogBesselI0)->Arg(1)->Arg(10)->Arg(100)->Arg(10000);
