#include <benchmark/benchmark.h>

#include "knudsen/geometry.hpp"
#include "knudsen/philox.hpp"

using knudsen::Domain;
using knudsen::Vec;

static void BM_DiskExitTime(benchmark::State& state) {
  const Domain disk = Domain::disk(1.0);
  knudsen::CounterRng rng(9, 0, 0);
  Vec x = knudsen::vec2(0.2, -0.1);
  for (auto _ : state) {
    const Vec v = knudsen::vec2(rng.normal(), rng.normal());
    benchmark::DoNotOptimize(disk.exit_time(x, v));
  }
}
BENCHMARK(BM_DiskExitTime);

static void BM_DiskExitHit(benchmark::State& state) {
  const Domain disk = Domain::disk(1.0);
  knudsen::CounterRng rng(9, 0, 1);
  Vec x = knudsen::vec2(0.2, -0.1);
  for (auto _ : state) {
    const Vec v = knudsen::vec2(rng.normal(), rng.normal());
    benchmark::DoNotOptimize(disk.exit_hit(x, v));
  }
}
BENCHMARK(BM_DiskExitHit);

static void BM_PolygonExitHit(benchmark::State& state) {
  const Domain hex = Domain::polygon({
      knudsen::vec2(1.0, 0.0), knudsen::vec2(0.5, 0.9),
      knudsen::vec2(-0.5, 0.9), knudsen::vec2(-1.0, 0.0),
      knudsen::vec2(-0.5, -0.9), knudsen::vec2(0.5, -0.9)});
  knudsen::CounterRng rng(9, 0, 2);
  Vec x = knudsen::vec2(0.1, 0.2);
  for (auto _ : state) {
    const Vec v = knudsen::vec2(rng.normal(), rng.normal());
    benchmark::DoNotOptimize(hex.exit_hit(x, v));
  }
}
BENCHMARK(BM_PolygonExitHit);
