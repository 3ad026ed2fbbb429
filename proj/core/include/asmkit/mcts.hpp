#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "asmkit/cyber_engine.hpp"
#include "asmkit/scenario.hpp"

namespace asmkit {

struct SearchConfig {
  int iterations = 2000;            // MCTS iterations per decision step
  double exploration = 1.41421356237309515;  // UCT c
  double budget = 0.0;              // attack budget (effort units)
  std::optional<int> rollout_depth_limit;
  std::uint64_t rng_seed = 0;
  std::optional<double> time_limit_seconds;  // per decision step
};

// Terminal-KPI evaluator with memoization. Terminal states that activate
// the same (impact action, schedule time) set share one simulation run.
class ScenarioEvaluator {
 public:
  ScenarioEvaluator(const Ci& ci, const Sm& sm, Scenario base,
                    bool use_cache = true);

  // y for the scenario induced by an executed-action log.
  double evaluate(const std::vector<std::size_t>& action_log);
  KpiResult evaluate_full(const std::vector<std::size_t>& action_log) const;
  double baseline_y();  // empty impact schedule

  std::size_t cache_hits() const { return hits_; }
  std::size_t cache_misses() const { return misses_; }

 private:
  const Ci& ci_;
  const Sm& sm_;
  Scenario base_;
  bool use_cache_;
  std::map<std::string, double> cache_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

struct AttackStep {
  std::string action_id;
  std::string category;
  double cost = 0.0;
  double cumulative_cost = 0.0;
};

struct AttackPath {
  std::vector<AttackStep> steps;
  double total_cost = 0.0;
  double y = 0.0;           // KPI of the committed terminal scenario
  double baseline_y = 0.0;  // no-attack KPI for reference
  bool empty_flagged = false;  // no affordable entry point under the budget
  std::vector<CyberState> trace;

  std::vector<std::string> action_ids() const;
};

// Exploration-free score of a visited child; unvisited children are
// selected unconditionally before any visited sibling.
double uct_score(double total_reward, int visit_count, int parent_visits,
                 double exploration);

// Uniform random playout to a terminal state; returns the terminal y.
double rollout(const Ci& ci, const CyberState& state, double budget,
               std::mt19937_64& rng, ScenarioEvaluator& evaluator,
               const EngineConfig& engine = {},
               std::optional<int> depth_limit = std::nullopt);

// Budget-constrained MCTS minimizing y: repeated decision steps of
// `iterations` UCT iterations each, committing the child with the highest
// mean reward (reward = 1 - y), until the committed state is terminal.
// Deterministic for a fixed seed.
AttackPath search(const Ci& ci, const Sm& sm, const Scenario& base,
                  const SearchConfig& config, const EngineConfig& engine = {});

nlohmann::json attack_path_to_json(const AttackPath& path);

}  // namespace asmkit
