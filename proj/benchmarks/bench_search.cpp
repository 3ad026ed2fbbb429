#include <benchmark/benchmark.h>

#include <random>

#include "asmkit/fixtures.hpp"
#include "asmkit/mcts.hpp"

using namespace asmkit;

static void BM_RolloutMedium(benchmark::State& state) {
  Fixture f = make_medium_fixture();
  ScenarioEvaluator evaluator(f.ci, *f.sm, f.base);
  std::mt19937_64 rng(3);
  const CyberState root = init_states(f.ci);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rollout(f.ci, root, f.budget, rng, evaluator));
  }
}
BENCHMARK(BM_RolloutMedium);

static void BM_SearchMicro(benchmark::State& state) {
  Fixture f = make_micro_fixture(0);
  SearchConfig config;
  config.iterations = static_cast<int>(state.range(0));
  config.budget = f.budget;
  config.rng_seed = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search(f.ci, *f.sm, f.base, config));
  }
}
BENCHMARK(BM_SearchMicro)->Arg(50)->Arg(200);

static void BM_SearchMedium(benchmark::State& state) {
  Fixture f = make_medium_fixture();
  SearchConfig config;
  config.iterations = static_cast<int>(state.range(0));
  config.budget = f.budget;
  config.rng_seed = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search(f.ci, *f.sm, f.base, config));
  }
}
BENCHMARK(BM_SearchMedium)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
