#include <benchmark/benchmark.h>

#include <numbers>

#include "listflow/diagnostics.hpp"
#include "listflow/flow.hpp"
#include "listflow/scenarios.hpp"
#include "listflow/warped.hpp"

namespace {

using namespace listflow;

FlowState coupled(std::size_t n) {
  return instantiate("coupled", PeriodicGrid::cube(2, n, 2.0 * std::numbers::pi), 0.1);
}

void BM_BuildCache(benchmark::State& st) {
  const FlowState s = coupled(static_cast<std::size_t>(st.range(0)));
  const auto order = st.range(1) == 4 ? StencilOrder::kFourth : StencilOrder::kSecond;
  for (auto _ : st) {
    benchmark::DoNotOptimize(build_cache(s.h, s.u, order));
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.h.grid().node_count()));
}
BENCHMARK(BM_BuildCache)->Args({32, 2})->Args({64, 2})->Args({64, 4})->Args({128, 2})->Unit(benchmark::kMicrosecond);

void BM_Rk4Step(benchmark::State& st) {
  const FlowState s = coupled(static_cast<std::size_t>(st.range(0)));
  FlowConfig cfg;
  cfg.t0 = 0.1;
  cfg.t_end = 1e9;
  const GeometryCache c = build_cache(s.h, s.u, cfg.order);
  for (auto _ : st) {
    benchmark::DoNotOptimize(step(s, c, cfg));
  }
}
BENCHMARK(BM_Rk4Step)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_MonitoredRun(benchmark::State& st) {
  const FlowState s = coupled(32);
  FlowConfig cfg;
  cfg.t0 = 0.1;
  cfg.t_end = 1e9;
  cfg.max_steps = 50;
  for (auto _ : st) {
    benchmark::DoNotOptimize(run(s, cfg));
  }
}
BENCHMARK(BM_MonitoredRun)->Unit(benchmark::kMillisecond);

void BM_WarpedCrossCheck(benchmark::State& st) {
  const FlowState s = coupled(static_cast<std::size_t>(st.range(0)));
  const GeometryCache c = build_cache(s.h, s.u, StencilOrder::kSecond);
  for (auto _ : st) {
    benchmark::DoNotOptimize(cross_check(assemble_warped(s.h, s.u), c, s.u, StencilOrder::kSecond));
  }
}
BENCHMARK(BM_WarpedCrossCheck)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
