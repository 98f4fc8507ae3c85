#include <random>

#include <benchmark/benchmark.h>

#include "wmemo/harness.hpp"

namespace {

using namespace wmemo;

void BM_Predict(benchmark::State& state) {
  const CacheGeometry g;
  std::mt19937_64 rng(1);
  std::vector<std::pair<Addr, std::int64_t>> in(4096);
  for (auto& [b, d] : in) {
    b = rng() & g.address_mask();
    d = std::int64_t(rng() % 0x8000) - 0x4000;
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [b, d] = in[i++ & 4095];
    benchmark::DoNotOptimize(predict(b, d, g));
  }
}
BENCHMARK(BM_Predict);

void BM_CacheAccess(benchmark::State& state) {
  const auto g = CacheGeometry::from_widths(32, 5, 9, unsigned(state.range(0)));
  SetAssocCache c{g};
  std::mt19937_64 rng(2);
  std::vector<Addr> in(4096);
  for (auto& a : in) a = rng() % (1u << 17);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(c.access(in[i++ & 4095]));
}
BENCHMARK(BM_CacheAccess)->Arg(2)->Arg(4)->Arg(8);

void BM_SimulatorStep(benchmark::State& state) {
  RandomSpec s;
  s.n = 100'000;
  const auto trace = gen_random(s, CacheGeometry{});
  const auto mode = static_cast<SimMode>(state.range(0));
  for (auto _ : state) {
    Simulator sim{SimConfig{}, mode};
    for (const auto& r : trace) benchmark::DoNotOptimize(sim.step(r));
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(trace.size()));
  state.SetLabel(std::string(to_string(mode)));
}
BENCHMARK(BM_SimulatorStep)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_DifferentialRun(benchmark::State& state) {
  LoopSpec s;
  s.iterations = 5000;
  const auto trace = gen_loop(s, CacheGeometry{});
  const std::vector<LaneSpec> lanes{*lane_from_name("baseline"),
                                    *lane_from_name("intra_only"),
                                    *lane_from_name("full_mab"),
                                    *lane_from_name("full_mab_lazy")};
  for (auto _ : state)
    benchmark::DoNotOptimize(differential_run(trace, SimConfig{}, lanes));
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(trace.size()));
}
BENCHMARK(BM_DifferentialRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
