#pragma once

#include <cstddef>
#include <vector>

#include "asmkit/cyber_engine.hpp"
#include "asmkit/mcts.hpp"

namespace asmkit::testing {

// Exhaustive DFS over the affordable-action sets: every terminal sequence
// (no affordable action left) reachable under the budget. Throws if more
// than `limit` sequences exist.
std::vector<std::vector<std::size_t>> enumerate_terminal_sequences(
    const Ci& ci, double budget, const EngineConfig& engine = {},
    std::size_t limit = 200000);

// Minimum terminal y over the whole feasible space.
double brute_force_min_y(const Ci& ci, ScenarioEvaluator& evaluator,
                         double budget, const EngineConfig& engine = {});

}  // namespace asmkit::testing
