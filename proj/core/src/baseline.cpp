#include "asmkit/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "asmkit/errors.hpp"
#include "asmkit/hash.hpp"

namespace asmkit {

namespace {

std::uint64_t sequence_hash(const Ci& ci,
                            const std::vector<std::size_t>& action_log) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t index : action_log) {
    h = fnv1a64(ci.action_ids()[index], h);
    h = fnv1a64("\x1f", h);
  }
  return h;
}

}  // namespace

SampleSet sample_random(const Ci& ci, const Sm& sm, const Scenario& base,
                        double budget, int count, std::uint64_t seed,
                        const EngineConfig& engine) {
  if (count < 1) throw PreconditionError("count must be >= 1");

  ScenarioEvaluator evaluator(ci, sm, base);
  std::mt19937_64 rng(seed);
  const CyberState initial = init_states(ci);

  SampleSet set;
  set.seed = seed;
  set.budget = budget;

  std::set<std::uint64_t> seen;
  // When rejections pile up without producing a new sequence, the feasible
  // space is treated as exhausted.
  const int rejection_limit = std::max(1000, 50 * count);
  int consecutive_rejections = 0;

  while (static_cast<int>(set.samples.size()) < count) {
    CyberState current = initial;
    for (;;) {
      std::vector<std::size_t> options =
          affordable_actions(ci, current, budget);
      if (options.empty()) break;
      const std::size_t pick =
          options[std::uniform_int_distribution<std::size_t>(
              0, options.size() - 1)(rng)];
      current = step(ci, current, pick, engine);
    }
    const std::uint64_t hash = sequence_hash(ci, current.action_log);
    if (!seen.insert(hash).second) {
      if (++consecutive_rejections >= rejection_limit) {
        set.shortfall = true;
        break;
      }
      continue;
    }
    consecutive_rejections = 0;
    BaselineSample sample;
    sample.sequence_hash = hash;
    for (std::size_t index : current.action_log) {
      sample.actions.push_back(ci.action_ids()[index]);
    }
    sample.y = evaluator.evaluate(current.action_log);
    set.samples.push_back(std::move(sample));
  }
  return set;
}

PCdfResult p_cdf(const SampleSet& samples, double y_star) {
  if (samples.samples.empty()) {
    throw PreconditionError("empty sample set");
  }
  const double n = static_cast<double>(samples.samples.size());
  double above = 0.0;
  for (const BaselineSample& sample : samples.samples) {
    if (sample.y > y_star) above += 1.0;
  }
  PCdfResult result;
  result.sample_count = samples.samples.size();
  result.value = above / n;
  // Wilson 95% interval.
  const double z = 1.959963984540054;
  const double p = result.value;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double spread =
      z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  result.wilson_low = std::max(0.0, center - spread);
  result.wilson_high = std::min(1.0, center + spread);
  return result;
}

BudgetBreakdown budget_breakdown(const AttackPath& path, const Ci& ci) {
  BudgetBreakdown out;
  double total = 0.0;
  for (const AttackStep& step : path.steps) {
    const ActionSpec* action = ci.find_action(step.action_id);
    if (action == nullptr) {
      throw ReferenceError("path names unknown action", step.action_id);
    }
    total += action->cost;
    switch (action->category) {
      case ActionCategory::kAccess:
        (action->entry_point ? out.access_entry : out.access_lateral) +=
            action->cost;
        break;
      case ActionCategory::kExploit:
        out.exploit += action->cost;
        break;
      case ActionCategory::kImpact:
        out.impact += action->cost;
        break;
    }
  }
  if (total > 0.0) {
    out.access_entry /= total;
    out.access_lateral /= total;
    out.exploit /= total;
    out.impact /= total;
  }
  return out;
}

nlohmann::json sample_set_to_json(const SampleSet& set) {
  nlohmann::json samples = nlohmann::json::array();
  for (const BaselineSample& sample : set.samples) {
    samples.push_back({{"hash", to_hex(sample.sequence_hash)},
                       {"actions", sample.actions},
                       {"y", sample.y}});
  }
  return nlohmann::json{{"samples", std::move(samples)},
                        {"seed", set.seed},
                        {"budget", set.budget},
                        {"ci_fingerprint", set.ci_fingerprint},
                        {"shortfall", set.shortfall}};
}

SampleSet sample_set_from_json(const nlohmann::json& doc) {
  SampleSet set;
  set.seed = doc.value("seed", 0ull);
  set.budget = doc.value("budget", 0.0);
  set.ci_fingerprint = doc.value("ci_fingerprint", std::string{});
  set.shortfall = doc.value("shortfall", false);
  for (const nlohmann::json& record : doc.value("samples", nlohmann::json::array())) {
    BaselineSample sample;
    sample.sequence_hash =
        std::stoull(record.value("hash", std::string{"0"}), nullptr, 16);
    sample.actions = record.value("actions", std::vector<std::string>{});
    sample.y = record.at("y").get<double>();
    set.samples.push_back(std::move(sample));
  }
  return set;
}

}  // namespace asmkit
