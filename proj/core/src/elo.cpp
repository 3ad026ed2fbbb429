#include "asmkit/elo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "asmkit/errors.hpp"

namespace asmkit {

double elo_expected_score(double phi_a, double phi_b, double k_e) {
  if (k_e <= 0.0) throw PreconditionError("k_e must be positive");
  return 1.0 / (1.0 + std::pow(10.0, (phi_b - phi_a) / k_e));
}

std::pair<double, double> elo_update(double phi_a, double phi_b,
                                     double outcome,
                                     const RatingConfig& config) {
  const double expected_a = elo_expected_score(phi_a, phi_b, config.k_e);
  const double expected_b = 1.0 - expected_a;
  const double outcome_b = 1.0 - outcome;
  return {phi_a + config.k_u * (outcome - expected_a),
          phi_b + config.k_u * (outcome_b - expected_b)};
}

RatingResult bootstrap_ratings(const std::vector<Comparison>& comparisons,
                               const RatingConfig& config,
                               const std::vector<std::string>& known_actions) {
  if (comparisons.empty()) {
    throw PreconditionError("no comparisons to calibrate from");
  }
  if (config.bootstrap_resamples < 1) {
    throw PreconditionError("bootstrap_resamples must be >= 1");
  }
  for (const Comparison& c : comparisons) {
    if (c.action_a == c.action_b) {
      throw PreconditionError("comparison of an action with itself",
                              c.action_a);
    }
    if (c.outcome != 0.0 && c.outcome != 0.5 && c.outcome != 1.0) {
      throw PreconditionError("outcome must be one of {0, 0.5, 1}",
                              c.action_a + " vs " + c.action_b);
    }
  }

  std::map<std::string, std::size_t> slots;
  auto slot = [&](const std::string& id) {
    return slots.emplace(id, slots.size()).first->second;
  };
  for (const Comparison& c : comparisons) {
    slot(c.action_a);
    slot(c.action_b);
  }
  std::set<std::string> compared;
  for (const auto& [id, index] : slots) compared.insert(id);
  for (const std::string& id : known_actions) slot(id);

  const std::size_t n = slots.size();
  std::vector<std::vector<double>> finals(n);
  std::vector<std::size_t> order(comparisons.size());
  std::vector<double> ratings(n);
  std::mt19937_64 rng(config.rng_seed);

  for (int resample = 0; resample < config.bootstrap_resamples; ++resample) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::fill(ratings.begin(), ratings.end(), config.initial_rating);
    for (std::size_t i : order) {
      const Comparison& c = comparisons[i];
      const std::size_t a = slots[c.action_a];
      const std::size_t b = slots[c.action_b];
      std::tie(ratings[a], ratings[b]) =
          elo_update(ratings[a], ratings[b], c.outcome, config);
    }
    for (std::size_t i = 0; i < n; ++i) finals[i].push_back(ratings[i]);
  }

  RatingResult result;
  for (auto& [id, index] : slots) {
    std::vector<double>& values = finals[index];
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    const double median = (m % 2 == 1)
                              ? values[m / 2]
                              : 0.5 * (values[m / 2 - 1] + values[m / 2]);
    result.ratings[id] = median;
    if (!compared.contains(id)) result.unseen.insert(id);
  }
  return result;
}

std::vector<Comparison> parse_comparisons(const std::string& text,
                                          const std::string& path) {
  std::vector<Comparison> out;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& err) {
      throw ParseError(err.what(),
                       path + ":" + std::to_string(line_number));
    }
    Comparison c;
    c.action_a = record.at("action_a").get<std::string>();
    c.action_b = record.at("action_b").get<std::string>();
    c.outcome = record.at("outcome").get<double>();
    c.annotator = record.value("annotator", std::string{});
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Comparison> load_comparisons(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_comparisons(buffer.str(), path);
}

nlohmann::json export_cost_map(const RatingResult& result) {
  double min_rating = 0.0;
  for (const auto& [id, rating] : result.ratings) {
    min_rating = std::min(min_rating, rating);
  }
  const double shift = std::max(0.0, -min_rating);
  nlohmann::json costs = nlohmann::json::object();
  for (const auto& [id, rating] : result.ratings) {
    costs[id] = rating + shift;
  }
  nlohmann::json doc;
  doc["costs"] = std::move(costs);
  doc["rating_shift"] = shift;
  if (shift > 0.0) {
    doc["note"] =
        "costs were shifted up uniformly to stay nonnegative; scale the "
        "attack budget by the same shift times the expected path length "
        "if it was calibrated against raw ratings";
  }
  doc["unseen"] = std::vector<std::string>(result.unseen.begin(),
                                           result.unseen.end());
  return doc;
}

}  // namespace asmkit
