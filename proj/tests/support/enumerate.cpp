#include "enumerate.hpp"

#include <stdexcept>

namespace asmkit::testing {

namespace {

void dfs(const Ci& ci, const CyberState& state, double budget,
         const EngineConfig& engine, std::size_t limit,
         std::vector<std::size_t>& prefix,
         std::vector<std::vector<std::size_t>>& out) {
  const auto options = affordable_actions(ci, state, budget);
  if (options.empty()) {
    if (out.size() >= limit) {
      throw std::runtime_error("feasible-sequence space exceeds limit");
    }
    out.push_back(prefix);
    return;
  }
  for (std::size_t index : options) {
    prefix.push_back(index);
    dfs(ci, step(ci, state, index, engine), budget, engine, limit, prefix,
        out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> enumerate_terminal_sequences(
    const Ci& ci, double budget, const EngineConfig& engine,
    std::size_t limit) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> prefix;
  dfs(ci, init_states(ci), budget, engine, limit, prefix, out);
  return out;
}

double brute_force_min_y(const Ci& ci, ScenarioEvaluator& evaluator,
                         double budget, const EngineConfig& engine) {
  double best = evaluator.baseline_y();
  bool first = true;
  for (const auto& sequence : enumerate_terminal_sequences(ci, budget, engine)) {
    const double y = evaluator.evaluate(sequence);
    if (first || y < best) best = y;
    first = false;
  }
  return best;
}

}  // namespace asmkit::testing
