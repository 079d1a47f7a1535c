#include <benchmark/benchmark.h>

#include "collapse/crosscheck.hpp"
#include "collapse/simulator.hpp"

using namespace collapse;

namespace {

// Arg: event budget. The double run stops early once gaps underflow.
void BM_CollapseDouble(benchmark::State& st) {
  const auto s = scripted_collapse_datum(0.02).cast<double>();
  StopCriteria stop;
  stop.max_events = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) {
    auto res = run(s, stop);
    benchmark::DoNotOptimize(res.events.data());
  }
}
BENCHMARK(BM_CollapseDouble)->Arg(13)->Unit(benchmark::kMicrosecond);

void BM_CollapseHigh(benchmark::State& st) {
  const auto s = scripted_collapse_datum(0.02);
  StopCriteria stop;
  stop.max_events = static_cast<std::size_t>(st.range(0));
  stop.min_gap = 0.0;
  for (auto _ : st) {
    auto res = run(s, stop);
    benchmark::DoNotOptimize(res.events.data());
  }
}
BENCHMARK(BM_CollapseHigh)->Arg(13)->Arg(220)->Unit(benchmark::kMillisecond);

void BM_FullMapping(benchmark::State& st) {
  std::mt19937_64 rng(7);
  const auto cfg = random_valid_config(3, 0.3, rng);
  for (auto _ : st) {
    auto out = complete_one_collision(cfg, 0.3);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_FullMapping);

}  // namespace
