#include <benchmark/benchmark.h>

#include "asmkit/fixtures.hpp"

using namespace asmkit;

static void BM_EvaluateBaselineMedium(benchmark::State& state) {
  Fixture f = make_medium_fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.sm->evaluate(f.base));
  }
}
BENCHMARK(BM_EvaluateBaselineMedium);

static void BM_EvaluateAttackedMedium(benchmark::State& state) {
  Fixture f = make_medium_fixture();
  Scenario attacked = f.base;
  ImpactEvent event;
  event.handler = "load_scaling";
  event.parameters = {{"bus", "f1.b07"}, {"factor", 3.0}, {"phase", "a"}};
  attacked.impacts.push_back(event);
  event.handler = "switch_topology";
  event.parameters = nlohmann::json::object();
  attacked.impacts.push_back(event);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.sm->evaluate(attacked));
  }
}
BENCHMARK(BM_EvaluateAttackedMedium);
