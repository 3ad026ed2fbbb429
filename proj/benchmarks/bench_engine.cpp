#include <benchmark/benchmark.h>

#include <random>

#include "asmkit/cyber_engine.hpp"
#include "asmkit/fixtures.hpp"

using namespace asmkit;

static void BM_StepSmall(benchmark::State& state) {
  Fixture f = make_small_fixture();
  const CyberState initial = init_states(f.ci);
  const std::size_t entry = *f.ci.action_index("link_a.access");
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(f.ci, initial, entry));
  }
}
BENCHMARK(BM_StepSmall);

static void BM_StepMedium(benchmark::State& state) {
  Fixture f = make_medium_fixture();
  const CyberState initial = init_states(f.ci);
  const std::size_t entry = *f.ci.action_index("up_edge_07.access");
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(f.ci, initial, entry));
  }
}
BENCHMARK(BM_StepMedium);

static void BM_RandomWalkMedium(benchmark::State& state) {
  Fixture f = make_medium_fixture();
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    CyberState current = init_states(f.ci);
    while (true) {
      auto affordable = affordable_actions(f.ci, current, f.budget);
      if (affordable.empty()) break;
      current = step(f.ci, current, affordable[rng() % affordable.size()]);
    }
    benchmark::DoNotOptimize(current.spent_budget);
  }
}
BENCHMARK(BM_RandomWalkMedium);
