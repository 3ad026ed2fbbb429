#include <algorithm>
#include <cmath>
#include <random>

#include "asmkit/elo.hpp"
#include "asmkit/errors.hpp"
#include "doctest.h"

using namespace asmkit;

TEST_CASE("expected score: worked values and antisymmetry") {
  CHECK(elo_expected_score(1000.0, 1000.0, 400.0) == doctest::Approx(0.5));
  // A rating lead of exactly one scale gain.
  CHECK(elo_expected_score(1400.0, 1000.0, 400.0) ==
        doctest::Approx(1.0 / 1.1).epsilon(1e-12));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rating(500.0, 1500.0);
  for (int i = 0; i < 200; ++i) {
    const double a = rating(rng);
    const double b = rating(rng);
    const double e_ab = elo_expected_score(a, b, 400.0);
    CHECK(e_ab > 0.0);
    CHECK(e_ab < 1.0);
    CHECK(e_ab + elo_expected_score(b, a, 400.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("update: worked values and rating conservation") {
  RatingConfig config;
  auto [same_a, same_b] = elo_update(1200.0, 1200.0, 0.5, config);
  CHECK(same_a == doctest::Approx(1200.0));
  CHECK(same_b == doctest::Approx(1200.0));

  auto [up, down] = elo_update(1000.0, 1000.0, 1.0, config);
  CHECK(up == doctest::Approx(1016.0));
  CHECK(down == doctest::Approx(984.0));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> rating(500.0, 1500.0);
  for (int i = 0; i < 200; ++i) {
    const double a = rating(rng);
    const double b = rating(rng);
    const double outcome = static_cast<double>(rng() % 3) / 2.0;
    auto [na, nb] = elo_update(a, b, outcome, config);
    CHECK(na + nb == doctest::Approx(a + b).epsilon(1e-12));
  }
}

TEST_CASE("bootstrap: single comparison orders the pair") {
  RatingConfig config;
  config.bootstrap_resamples = 50;
  auto result = bootstrap_ratings({{"a", "b", 1.0, ""}}, config);
  CHECK(result.ratings.at("a") > result.ratings.at("b"));
  CHECK(result.ratings.at("a") == doctest::Approx(1016.0));
  CHECK(result.unseen.empty());
}

TEST_CASE("bootstrap: deterministic for a fixed seed") {
  std::vector<Comparison> comparisons = {
      {"a", "b", 1.0, ""}, {"b", "c", 1.0, ""}, {"a", "c", 0.5, ""},
      {"c", "d", 0.0, ""}, {"a", "d", 1.0, ""}};
  RatingConfig config;
  config.bootstrap_resamples = 200;
  config.rng_seed = 99;
  auto one = bootstrap_ratings(comparisons, config);
  auto two = bootstrap_ratings(comparisons, config);
  CHECK(one.ratings == two.ratings);
}

TEST_CASE("bootstrap: cyclic evidence keeps the three ratings close") {
  std::vector<Comparison> comparisons;
  for (int round = 0; round < 4; ++round) {
    comparisons.push_back({"a", "b", 1.0, ""});
    comparisons.push_back({"b", "c", 1.0, ""});
    comparisons.push_back({"c", "a", 1.0, ""});
  }
  RatingConfig config;
  config.bootstrap_resamples = 1000;
  auto result = bootstrap_ratings(comparisons, config);
  const double a = result.ratings.at("a");
  const double b = result.ratings.at("b");
  const double c = result.ratings.at("c");
  CHECK(std::abs(a - b) < config.k_u);
  CHECK(std::abs(b - c) < config.k_u);
  CHECK(std::abs(a - c) < config.k_u);
}

TEST_CASE("bootstrap: order robustness at 1000 resamples") {
  std::vector<Comparison> comparisons = {
      {"a", "b", 1.0, ""}, {"b", "c", 1.0, ""}, {"a", "c", 1.0, ""},
      {"c", "d", 1.0, ""}, {"b", "d", 0.5, ""}, {"a", "d", 1.0, ""},
      {"d", "e", 0.0, ""}, {"e", "a", 0.5, ""}};
  RatingConfig config;
  config.bootstrap_resamples = 1000;
  config.rng_seed = 1;
  auto one = bootstrap_ratings(comparisons, config);

  std::vector<Comparison> permuted = comparisons;
  std::mt19937_64 rng(777);
  std::shuffle(permuted.begin(), permuted.end(), rng);
  config.rng_seed = 2;
  auto two = bootstrap_ratings(permuted, config);

  for (const auto& [action, rating] : one.ratings) {
    CHECK(std::abs(rating - two.ratings.at(action)) <= 0.05 * config.k_u);
  }
}

TEST_CASE("actions without evidence keep the initial rating, flagged") {
  RatingConfig config;
  config.bootstrap_resamples = 10;
  auto result =
      bootstrap_ratings({{"a", "b", 1.0, ""}}, config, {"a", "b", "ghost"});
  CHECK(result.ratings.at("ghost") == config.initial_rating);
  CHECK(result.unseen == std::set<std::string>{"ghost"});
}

TEST_CASE("comparison parsing: JSONL records with validation") {
  const std::string text =
      "{\"action_a\": \"a\", \"action_b\": \"b\", \"outcome\": 1}\n"
      "\n"
      "{\"action_a\": \"b\", \"action_b\": \"c\", \"outcome\": 0.5, "
      "\"annotator\": \"x1\"}\n";
  auto comparisons = parse_comparisons(text);
  REQUIRE(comparisons.size() == 2);
  CHECK(comparisons[0].action_a == "a");
  CHECK(comparisons[0].outcome == 1.0);
  CHECK(comparisons[1].annotator == "x1");

  CHECK_THROWS_AS(parse_comparisons("not json\n"), ParseError);

  // Invalid records are caught at calibration time.
  RatingConfig config;
  CHECK_THROWS_AS(bootstrap_ratings({{"a", "a", 1.0, ""}}, config),
                  PreconditionError);
  CHECK_THROWS_AS(bootstrap_ratings({{"a", "b", 0.7, ""}}, config),
                  PreconditionError);
  CHECK_THROWS_AS(bootstrap_ratings({}, config), PreconditionError);
}

TEST_CASE("cost export shifts ratings to nonnegative values") {
  RatingResult result;
  result.ratings = {{"a", -40.0}, {"b", 10.0}, {"c", 0.0}};
  nlohmann::json doc = export_cost_map(result);
  CHECK(doc["rating_shift"].get<double>() == doctest::Approx(40.0));
  CHECK(doc["costs"]["a"].get<double>() == doctest::Approx(0.0));
  CHECK(doc["costs"]["b"].get<double>() == doctest::Approx(50.0));

  RatingResult positive;
  positive.ratings = {{"a", 5.0}, {"b", 7.5}};
  nlohmann::json unshifted = export_cost_map(positive);
  CHECK(unshifted["rating_shift"].get<double>() == 0.0);
  CHECK(unshifted["costs"]["b"].get<double>() == doctest::Approx(7.5));
}
