#include <benchmark/benchmark.h>

#include "knudsen/kernel.hpp"
#include "knudsen/philox.hpp"

using namespace knudsen;

static void BM_CLDensity(benchmark::State& state) {
  const AccommodationParams p(0.5, 0.5);
  const double u_speed = static_cast<double>(state.range(0));
  const double u_par = 0.3 * u_speed;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cl_density_components(u_speed, &u_par, 1.1, &u_par, 1.0, p, 2));
  }
}
BENCHMARK(BM_CLDensity)->Arg(1)->Arg(10)->Arg(100);

static void BM_CLSample(benchmark::State& state) {
  const AccommodationParams p(0.5, 0.5);
  const BoundaryCondition bc = BoundaryCondition::cercignani_lampis(p);
  BoundaryHit hit;
  hit.normal = vec2(0.0, -1.0);
  hit.point = vec2(0.5, 0.0);
  hit.dim = 2;
  hit.temperature = 1.0;
  const Vec u = vec2(0.4, -1.3);  // incident on the bottom wall
  CounterRng rng(11, 0, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_outgoing(u, hit, bc, rng));
  }
}
BENCHMARK(BM_CLSample);

static void BM_DiffuseSample(benchmark::State& state) {
  const BoundaryCondition bc = BoundaryCondition::diffuse();
  BoundaryHit hit;
  hit.normal = vec2(0.0, -1.0);
  hit.point = vec2(0.5, 0.0);
  hit.dim = 2;
  hit.temperature = 1.0;
  const Vec u = vec2(0.4, -1.3);
  CounterRng rng(11, 0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_outgoing(u, hit, bc, rng));
  }
}
BENCHMARK(BM_DiffuseSample);
