#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace asmkit {

// One expert pairwise comparison. outcome is 1, 0.5 or 0 for action_a being
// judged more, similarly or less costly than action_b.
struct Comparison {
  std::string action_a;
  std::string action_b;
  double outcome = 0.5;
  std::string annotator;
};

struct RatingConfig {
  double k_e = 400.0;            // scale gain
  double k_u = 32.0;             // update gain
  double initial_rating = 1000.0;
  int bootstrap_resamples = 1000;
  std::uint64_t rng_seed = 0;
};

// Probability of A being judged at least as costly as B:
// 1 / (1 + 10^((phi_b - phi_a) / k_e)).
double elo_expected_score(double phi_a, double phi_b, double k_e);

// Symmetric rating update; the rating sum is conserved exactly.
std::pair<double, double> elo_update(double phi_a, double phi_b,
                                     double outcome,
                                     const RatingConfig& config);

struct RatingResult {
  std::map<std::string, double> ratings;  // per-action bootstrap medians
  std::set<std::string> unseen;  // actions with zero comparisons, kept at
                                 // initial_rating
};

// Runs `bootstrap_resamples` shuffled replays of the comparison list and
// returns the per-action median of the final ratings. Deterministic for a
// fixed seed. `known_actions` may list actions that must appear in the
// output even without evidence; those come back flagged in `unseen`.
RatingResult bootstrap_ratings(const std::vector<Comparison>& comparisons,
                               const RatingConfig& config,
                               const std::vector<std::string>& known_actions =
                                   {});

// Line-delimited JSON records {action_a, action_b, outcome, annotator?}.
std::vector<Comparison> load_comparisons(const std::string& path);
std::vector<Comparison> parse_comparisons(const std::string& text,
                                          const std::string& path = "<text>");

// Cost map export. Ratings may go negative; exported costs are shifted up
// by max(0, -min rating) so every cost satisfies the nonnegativity the CI
// requires. The applied shift is recorded in the document so budgets can be
// adjusted to match.
nlohmann::json export_cost_map(const RatingResult& result);

}  // namespace asmkit
