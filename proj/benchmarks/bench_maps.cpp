#include <benchmark/benchmark.h>

#include "collapse/full_mapping.hpp"
#include "collapse/phase_analysis.hpp"
#include "collapse/reduced_maps.hpp"

using namespace collapse;

namespace {

const MapParams kParams = MapParams::symmetric(0.05, 0.525);

void BM_TwoCollision(benchmark::State& st) {
  ReducedState s{0.2, 0.01};
  for (auto _ : st) {
    auto out = try_two_collision(s, kParams);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_TwoCollision);

void BM_LowEnergy(benchmark::State& st) {
  LowEnergyState s{0.5, 1.0};
  for (auto _ : st) {
    auto out = try_low_energy_map(s, 0.21, 0.9);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_LowEnergy);

void BM_ClassifyOrbit(benchmark::State& st) {
  for (auto _ : st) {
    auto c = classify_orbit({0.2, 0.01}, kParams);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_ClassifyOrbit);

// Arg: worker threads.
void BM_Sweep50(benchmark::State& st) {
  GridSpec g{{0.0, kParams.alpha, 50, true}, {0.0, 0.5, 50, true}};
  for (auto _ : st) {
    auto grid = sweep(g, kParams, {}, static_cast<int>(st.range(0)));
    benchmark::DoNotOptimize(grid.cells.data());
  }
}
BENCHMARK(BM_Sweep50)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
