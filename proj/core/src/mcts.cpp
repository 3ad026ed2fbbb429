#include "asmkit/mcts.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "asmkit/errors.hpp"

namespace asmkit {

ScenarioEvaluator::ScenarioEvaluator(const Ci& ci, const Sm& sm, Scenario base,
                                     bool use_cache)
    : ci_(ci), sm_(sm), base_(std::move(base)), use_cache_(use_cache) {}

namespace {

// Terminal states that activate the same impact set share a KPI value; the
// cache key ignores order and non-impact actions.
std::string impact_cache_key(const Ci& ci,
                             const std::vector<std::size_t>& action_log) {
  std::vector<std::pair<std::string, double>> impacts;
  for (std::size_t index : action_log) {
    const ActionSpec& action = ci.action(index);
    if (action.category == ActionCategory::kImpact) {
      impacts.emplace_back(action.id, action.schedule_time);
    }
  }
  std::sort(impacts.begin(), impacts.end());
  std::ostringstream key;
  for (const auto& [id, time] : impacts) key << id << '@' << time << ';';
  return key.str();
}

}  // namespace

double ScenarioEvaluator::evaluate(const std::vector<std::size_t>& action_log) {
  if (!use_cache_) {
    return sm_.evaluate(build_scenario(ci_, action_log, base_)).y;
  }
  const std::string key = impact_cache_key(ci_, action_log);
  auto it = cache_.find(key);
  if (it != cache_.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  const double y = sm_.evaluate(build_scenario(ci_, action_log, base_)).y;
  cache_.emplace(key, y);
  return y;
}

KpiResult ScenarioEvaluator::evaluate_full(
    const std::vector<std::size_t>& action_log) const {
  return sm_.evaluate(build_scenario(ci_, action_log, base_));
}

double ScenarioEvaluator::baseline_y() { return evaluate({}); }

double uct_score(double total_reward, int visit_count, int parent_visits,
                 double exploration) {
  if (visit_count == 0) return std::numeric_limits<double>::infinity();
  return total_reward / visit_count +
         exploration * std::sqrt(std::log(static_cast<double>(parent_visits)) /
                                 visit_count);
}

double rollout(const Ci& ci, const CyberState& state, double budget,
               std::mt19937_64& rng, ScenarioEvaluator& evaluator,
               const EngineConfig& engine, std::optional<int> depth_limit) {
  CyberState current = state;
  int depth = 0;
  for (;;) {
    if (depth_limit && depth >= *depth_limit) break;
    std::vector<std::size_t> options = affordable_actions(ci, current, budget);
    if (options.empty()) break;
    const std::size_t pick =
        options[std::uniform_int_distribution<std::size_t>(
            0, options.size() - 1)(rng)];
    current = step(ci, current, pick, engine);
    ++depth;
  }
  return evaluator.evaluate(current.action_log);
}

namespace {

struct Node {
  CyberState state;
  int visits = 0;
  double total_reward = 0.0;
  std::vector<std::size_t> untried;              // id-sorted, popped front
  std::map<std::size_t, std::unique_ptr<Node>> children;  // by action index
  Node* parent = nullptr;
  std::size_t action_from_parent = 0;

  bool terminal() const { return untried.empty() && children.empty(); }
};

std::unique_ptr<Node> make_node(const Ci& ci, CyberState state, double budget,
                                Node* parent, std::size_t action) {
  auto node = std::make_unique<Node>();
  node->state = std::move(state);
  node->untried = affordable_actions(ci, node->state, budget);
  node->parent = parent;
  node->action_from_parent = action;
  return node;
}

}  // namespace

AttackPath search(const Ci& ci, const Sm& sm, const Scenario& base,
                  const SearchConfig& config, const EngineConfig& engine) {
  if (config.iterations < 1) {
    throw PreconditionError("iterations must be >= 1");
  }
  if (config.budget <= 0.0) {
    throw PreconditionError("budget must be positive");
  }
  // Every impact handler the CI references must be supported up front.
  for (std::size_t i = 0; i < ci.action_count(); ++i) {
    const ActionSpec& action = ci.action(i);
    if (action.category == ActionCategory::kImpact && action.impact_handler &&
        !sm.supports_handler(action.impact_handler->name)) {
      throw PreconditionError("impact handler '" + action.impact_handler->name +
                                  "' is not supported by SM " + sm.id(),
                              action.id);
    }
  }

  ScenarioEvaluator evaluator(ci, sm, base);
  std::mt19937_64 rng(config.rng_seed);

  AttackPath path;
  path.baseline_y = evaluator.baseline_y();

  CyberState committed = init_states(ci);
  if (affordable_actions(ci, committed, config.budget).empty()) {
    path.empty_flagged = true;
    path.y = path.baseline_y;
    return path;
  }

  // Decision loop: search, commit the best child, repeat from there.
  while (true) {
    auto root = make_node(ci, committed, config.budget, nullptr, 0);
    if (root->terminal()) break;

    const auto step_start = std::chrono::steady_clock::now();
    for (int iteration = 0; iteration < config.iterations; ++iteration) {
      if (config.time_limit_seconds) {
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - step_start;
        if (elapsed.count() > *config.time_limit_seconds && iteration > 0) {
          break;
        }
      }

      // Selection.
      Node* node = root.get();
      while (node->untried.empty() && !node->children.empty()) {
        Node* best = nullptr;
        double best_score = -std::numeric_limits<double>::infinity();
        for (auto& [action, child] : node->children) {
          const double score = uct_score(child->total_reward, child->visits,
                                         node->visits, config.exploration);
          if (score > best_score) {
            best_score = score;
            best = child.get();
          }
        }
        node = best;
      }

      // Expansion.
      if (!node->untried.empty()) {
        const std::size_t action = node->untried.front();
        node->untried.erase(node->untried.begin());
        auto child = make_node(ci, step(ci, node->state, action, engine),
                               config.budget, node, action);
        Node* raw = child.get();
        node->children.emplace(action, std::move(child));
        node = raw;
      }

      // Rollout from the expanded node and backpropagation.
      const double y = rollout(ci, node->state, config.budget, rng, evaluator,
                               engine, config.rollout_depth_limit);
      const double reward = 1.0 - y;
      for (Node* cursor = node; cursor != nullptr; cursor = cursor->parent) {
        cursor->visits += 1;
        cursor->total_reward += reward;
      }
    }

    // Commit the child with the highest mean reward; ties break toward the
    // lowest action id (children are already ordered by action index).
    Node* best = nullptr;
    std::size_t best_action = 0;
    double best_mean = -std::numeric_limits<double>::infinity();
    for (auto& [action, child] : root->children) {
      if (child->visits == 0) continue;
      const double mean = child->total_reward / child->visits;
      const bool better =
          best == nullptr || mean > best_mean ||
          (mean == best_mean &&
           ci.action_ids()[action] < ci.action_ids()[best_action]);
      if (better) {
        best = child.get();
        best_action = action;
        best_mean = mean;
      }
    }
    if (best == nullptr) break;  // every child unvisited: cannot commit

    committed = best->state;
    const ActionSpec& action = ci.action(best_action);
    path.steps.push_back({action.id, to_string(action.category), action.cost,
                          committed.spent_budget});
    path.trace.push_back(committed);
  }

  path.total_cost = committed.spent_budget;
  path.y = evaluator.evaluate(committed.action_log);
  return path;
}

std::vector<std::string> AttackPath::action_ids() const {
  std::vector<std::string> out;
  out.reserve(steps.size());
  for (const AttackStep& step : steps) out.push_back(step.action_id);
  return out;
}

nlohmann::json attack_path_to_json(const AttackPath& path) {
  nlohmann::json steps = nlohmann::json::array();
  for (const AttackStep& step : path.steps) {
    steps.push_back({{"action_id", step.action_id},
                     {"category", step.category},
                     {"cost", step.cost},
                     {"cumulative_cost", step.cumulative_cost}});
  }
  return nlohmann::json{{"steps", std::move(steps)},
                        {"total_cost", path.total_cost},
                        {"y", path.y},
                        {"baseline_y", path.baseline_y},
                        {"empty", path.empty_flagged}};
}

}  // namespace asmkit
