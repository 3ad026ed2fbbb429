#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asmkit/mcts.hpp"

namespace asmkit {

struct BaselineSample {
  std::uint64_t sequence_hash = 0;
  std::vector<std::string> actions;
  double y = 0.0;
};

struct SampleSet {
  std::vector<BaselineSample> samples;
  std::uint64_t seed = 0;
  double budget = 0.0;
  std::string ci_fingerprint;
  bool shortfall = false;  // feasible space smaller than requested count
};

// Uniform random walks through the affordable-action sets down to terminal
// states. Duplicate sequences (by hash) are rejected and resampled; when
// rejections pile up the feasible space is treated as exhausted and the
// set comes back with `shortfall` set.
SampleSet sample_random(const Ci& ci, const Sm& sm, const Scenario& base,
                        double budget, int count, std::uint64_t seed,
                        const EngineConfig& engine = {});

struct PCdfResult {
  double value = 0.0;  // fraction of samples with y strictly above y_star
  double wilson_low = 0.0;
  double wilson_high = 1.0;
  std::size_t sample_count = 0;
};

// Fraction of baseline samples strictly less damaging (higher y) than the
// optimized result, with a Wilson 95% interval. Ties count against the
// optimizer.
PCdfResult p_cdf(const SampleSet& samples, double y_star);

struct BudgetBreakdown {
  double access_entry = 0.0;
  double access_lateral = 0.0;
  double exploit = 0.0;
  double impact = 0.0;
};

// Spent-budget fractions by action category, entry-point accesses split
// from lateral movement. Fractions sum to 1 for any non-empty path.
BudgetBreakdown budget_breakdown(const AttackPath& path, const Ci& ci);

nlohmann::json sample_set_to_json(const SampleSet& set);
SampleSet sample_set_from_json(const nlohmann::json& doc);

}  // namespace asmkit
