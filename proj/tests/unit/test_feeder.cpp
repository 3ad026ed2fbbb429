#include <cmath>

#include "asmkit/errors.hpp"
#include "asmkit/feeder.hpp"
#include "asmkit/fixtures.hpp"
#include "asmkit/subprocess_sm.hpp"
#include "doctest.h"

using namespace asmkit;

namespace {

// Constant-valued profile: one load triple per bus, flat over the horizon.
Scenario flat_scenario(const std::vector<std::string>& buses,
                       const std::vector<std::array<double, 3>>& loads,
                       int horizon, double step_seconds = 3600.0,
                       double q_ratio = 0.3) {
  auto profile = std::make_shared<OperatingProfile>();
  profile->horizon = horizon;
  profile->step_seconds = step_seconds;
  for (std::size_t b = 0; b < buses.size(); ++b) {
    BusProfile series;
    series.bus = buses[b];
    series.load_q_ratio = q_ratio;
    for (int ph = 0; ph < 3; ++ph) {
      series.load_p[ph].assign(horizon, loads[b][ph]);
      series.pv_p[ph].assign(horizon, 0.0);
    }
    profile->buses.push_back(std::move(series));
  }
  Scenario scenario;
  scenario.profile = std::move(profile);
  scenario.horizon = horizon;
  scenario.initial_op = nlohmann::json::object();
  return scenario;
}

// Independent chain solver: V_i = 1 - sum over upstream edges of
// (r * downstream P + x * downstream Q), written as direct double loops.
std::vector<std::array<double, 3>> chain_voltages(
    const std::vector<std::pair<double, double>>& z,
    const std::vector<std::array<double, 3>>& loads, double q_ratio) {
  const std::size_t n = z.size();
  std::vector<std::array<double, 3>> voltages(n);
  for (int ph = 0; ph < 3; ++ph) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = 1.0;
      for (std::size_t e = 0; e <= i; ++e) {
        double downstream_p = 0.0;
        for (std::size_t b = e; b < n; ++b) downstream_p += loads[b][ph];
        v -= z[e].first * downstream_p +
             z[e].second * downstream_p * q_ratio;
      }
      voltages[i][ph] = v;
    }
  }
  return voltages;
}

ImpactEvent impact(std::string handler, nlohmann::json parameters,
                   double schedule_time = 0.0) {
  ImpactEvent event;
  event.handler = std::move(handler);
  event.parameters = std::move(parameters);
  event.schedule_time = schedule_time;
  return event;
}

}  // namespace

TEST_CASE("balanced zero-reactive system scores a perfect KPI") {
  FeederConfig config;
  config.feeder1 = {{"b1", 0.02, 0.01}, {"b2", 0.02, 0.01}};
  config.feeder2 = {{"c1", 0.02, 0.01}};
  FeederSm sm(config);
  Scenario base = flat_scenario({"b1", "b2", "c1"},
                                {{0.1, 0.1, 0.1},
                                 {0.2, 0.2, 0.2},
                                 {0.3, 0.3, 0.3}},
                                4, 3600.0, /*q_ratio=*/0.0);
  KpiResult result = sm.evaluate(base);
  // The solver sums per-phase flows in different orders, so allow rounding
  // noise at the last bit.
  for (double vi : result.vi_series) CHECK(vi <= 1e-12);
  for (double spf : result.spf_series) CHECK(spf == doctest::Approx(1.0));
  CHECK(result.y == doctest::Approx(1.0));
  CHECK_FALSE(result.clamped);
  CHECK_FALSE(result.pure_reactive);
}

TEST_CASE("six-bus voltage drops match the hand calculation") {
  FeederConfig config;
  config.feeder1 = {{"b1", 0.02, 0.01}, {"b2", 0.03, 0.02},
                    {"b3", 0.01, 0.01}};
  config.feeder2 = {{"c1", 0.02, 0.02}, {"c2", 0.02, 0.02},
                    {"c3", 0.02, 0.02}};
  FeederSm sm(config);
  std::vector<std::array<double, 3>> loads1 = {
      {0.30, 0.20, 0.10}, {0.10, 0.10, 0.40}, {0.05, 0.05, 0.05}};
  std::vector<std::array<double, 3>> loads2 = {
      {0.20, 0.20, 0.20}, {0.00, 0.00, 0.00}, {0.10, 0.00, 0.00}};
  Scenario base = flat_scenario(
      {"b1", "b2", "b3", "c1", "c2", "c3"},
      {loads1[0], loads1[1], loads1[2], loads2[0], loads2[1], loads2[2]}, 3);

  // Anchor the reference solver on hand-derived phase-a values:
  // edge 1 carries 0.45 P / 0.135 Q, so V(b1,a) = 1 - 0.009 - 0.00135.
  auto v1 = chain_voltages({{0.02, 0.01}, {0.03, 0.02}, {0.01, 0.01}},
                           loads1, 0.3);
  CHECK(v1[0][0] == doctest::Approx(0.98965).epsilon(1e-12));
  CHECK(v1[1][0] == doctest::Approx(0.98425).epsilon(1e-12));
  CHECK(v1[2][0] == doctest::Approx(0.98360).epsilon(1e-12));
  auto v2 = chain_voltages({{0.02, 0.02}, {0.02, 0.02}, {0.02, 0.02}},
                           loads2, 0.3);

  std::vector<std::array<double, 3>> all_voltages;
  all_voltages.insert(all_voltages.end(), v1.begin(), v1.end());
  all_voltages.insert(all_voltages.end(), v2.begin(), v2.end());
  const double expected_vi = compute_vi(all_voltages);

  KpiResult result = sm.evaluate(base);
  REQUIRE(result.vi_series.size() == 3);
  for (double vi : result.vi_series) {
    CHECK(vi == doctest::Approx(expected_vi).epsilon(1e-9));
  }
}

TEST_CASE("disconnecting PV removes its injection from the flow solution") {
  // Losing the PV raises net consumption: voltage imbalance can only grow
  // (the phase spread scales with flow) and the substation power factor
  // improves because p rises while q stays put.
  Fixture f = make_small_fixture();
  KpiResult baseline = f.sm->evaluate(f.base);
  Scenario attacked = f.base;
  attacked.impacts.push_back(
      impact("pv_disconnect", {{"bus", "m1.b3"}}));
  KpiResult result = f.sm->evaluate(attacked);
  CHECK(result.y != baseline.y);
  REQUIRE(result.vi_series.size() == baseline.vi_series.size());
  bool vi_strictly_up = false;
  for (std::size_t t = 0; t < result.vi_series.size(); ++t) {
    CHECK(result.vi_series[t] >= baseline.vi_series[t] - 1e-15);
    CHECK(result.spf_series[t] >= baseline.spf_series[t] - 1e-15);
    if (result.vi_series[t] > baseline.vi_series[t]) vi_strictly_up = true;
  }
  CHECK(vi_strictly_up);
}

TEST_CASE("forced battery charge shifts the power factor exactly") {
  FeederConfig config;
  config.feeder1 = {{"s1", 0.001, 0.001}};
  config.batteries = {{"bat", "s1", 0.3, 10.0, 0.5, 9.0, -9.0}};
  FeederSm sm(config);
  Scenario base = flat_scenario({"s1"}, {{0.3, 0.3, 0.3}}, 2);

  KpiResult baseline = sm.evaluate(base);
  CHECK(baseline.spf_series[0] ==
        doctest::Approx(std::abs(std::cos(std::atan(0.27 / 0.9))))
            .epsilon(1e-12));

  Scenario attacked = base;
  attacked.impacts.push_back(
      impact("battery_max_charge", {{"battery", "bat"}}));
  KpiResult result = sm.evaluate(attacked);
  for (double spf : result.spf_series) {
    CHECK(spf == doctest::Approx(std::abs(std::cos(std::atan(0.27 / 1.2))))
                     .epsilon(1e-12));
  }
}

TEST_CASE("battery charge stops when the storage is full") {
  FeederConfig config;
  config.feeder1 = {{"s1", 0.001, 0.001}};
  // 0.2 pu-h of headroom and 1 h steps: 0.2 pu in step 0, nothing after.
  config.batteries = {{"bat", "s1", 0.3, 0.4, 0.5, 9.0, -9.0}};
  FeederSm sm(config);
  Scenario attacked = flat_scenario({"s1"}, {{0.3, 0.3, 0.3}}, 3);
  attacked.impacts.push_back(
      impact("battery_max_charge", {{"battery", "bat"}}));
  KpiResult result = sm.evaluate(attacked);
  CHECK(result.spf_series[0] ==
        doctest::Approx(std::abs(std::cos(std::atan(0.27 / 1.1))))
            .epsilon(1e-12));
  CHECK(result.spf_series[1] ==
        doctest::Approx(std::abs(std::cos(std::atan(0.27 / 0.9))))
            .epsilon(1e-12));
  CHECK(result.spf_series[2] == result.spf_series[1]);
}

TEST_CASE("topology switch re-parents feeder 2 through the tie") {
  FeederConfig config;
  config.feeder1 = {{"b1", 0.02, 0.01}};
  config.feeder2 = {{"c1", 0.05, 0.03}};
  config.tie_r = 0.04;
  config.tie_x = 0.02;
  FeederSm sm(config);
  std::vector<std::array<double, 3>> loads = {{0.3, 0.2, 0.1},
                                              {0.1, 0.1, 0.1}};
  Scenario base = flat_scenario({"b1", "c1"}, {loads[0], loads[1]}, 1);

  Scenario attacked = base;
  attacked.impacts.push_back(
      impact("switch_topology", nlohmann::json::object()));
  KpiResult result = sm.evaluate(attacked);

  // Hand solution of the merged chain b1 -> tie -> c1.
  auto merged = chain_voltages({{0.02, 0.01}, {0.04, 0.02}}, loads, 0.3);
  CHECK(merged[0][0] == doctest::Approx(0.9908).epsilon(1e-12));
  CHECK(merged[1][0] == doctest::Approx(0.9862).epsilon(1e-12));
  CHECK(result.vi_series[0] ==
        doctest::Approx(compute_vi(merged)).epsilon(1e-9));
  // Total demand is unchanged, so SPF is the baseline's.
  KpiResult baseline = sm.evaluate(base);
  CHECK(result.spf_series[0] == doctest::Approx(baseline.spf_series[0]));

  FeederConfig no_tie = config;
  no_tie.has_tie_switch = false;
  CHECK_THROWS_AS(FeederSm(no_tie).evaluate(attacked), PreconditionError);
}

TEST_CASE("load scaling equals editing the profile directly") {
  Fixture f = make_small_fixture();
  Scenario attacked = f.base;
  attacked.impacts.push_back(
      impact("load_scaling", {{"bus", "m1.b2"}, {"factor", 0.5}}));
  KpiResult scaled = f.sm->evaluate(attacked);

  Scenario edited = f.base;
  auto profile = std::make_shared<OperatingProfile>(*f.base.profile);
  for (BusProfile& bus : profile->buses) {
    if (bus.bus != "m1.b2") continue;
    for (int ph = 0; ph < 3; ++ph) {
      for (double& p : bus.load_p[ph]) p *= 0.5;
    }
  }
  edited.profile = std::move(profile);
  KpiResult reference = f.sm->evaluate(edited);
  CHECK(scaled.vi_series == reference.vi_series);
  CHECK(scaled.spf_series == reference.spf_series);
  CHECK(scaled.y == reference.y);
}

TEST_CASE("curtailing a capacitor to zero equals removing it") {
  FeederConfig with_cap;
  with_cap.feeder1 = {{"b1", 0.02, 0.01}, {"b2", 0.02, 0.01}};
  with_cap.capacitors = {{"cap", "b2", 0.06}};
  FeederConfig without_cap = with_cap;
  without_cap.capacitors.clear();
  Scenario base =
      flat_scenario({"b1", "b2"}, {{0.2, 0.2, 0.2}, {0.3, 0.2, 0.1}}, 4);

  Scenario curtailed = base;
  curtailed.impacts.push_back(impact(
      "capacitor_curtailment", {{"capacitor", "cap"}, {"factor", 0.0}}));
  KpiResult a = FeederSm(with_cap).evaluate(curtailed);
  KpiResult b = FeederSm(without_cap).evaluate(base);
  CHECK(a.vi_series == b.vi_series);
  CHECK(a.spf_series == b.spf_series);
  // And the capacitor does something when left alone.
  KpiResult c = FeederSm(with_cap).evaluate(base);
  CHECK(c.spf_series != b.spf_series);
}

TEST_CASE("a duration parameter bounds the impact window") {
  Fixture f = make_small_fixture();
  const double step = f.base.profile->step_seconds;
  Scenario attacked = f.base;
  attacked.impacts.push_back(
      impact("load_scaling",
             {{"bus", "m1.b2"}, {"factor", 3.0}, {"phase", "a"},
              {"duration", 3.0 * step}},
             2.0 * step));
  KpiResult windowed = f.sm->evaluate(attacked);
  KpiResult baseline = f.sm->evaluate(f.base);
  for (int t = 0; t < f.base.horizon; ++t) {
    if (t >= 2 && t < 5) {
      CHECK(windowed.vispf_series[t] != baseline.vispf_series[t]);
    } else {
      CHECK(windowed.vispf_series[t] == baseline.vispf_series[t]);
    }
  }
}

TEST_CASE("aggregation and SPF formula variants") {
  FeederConfig config;
  config.feeder1 = {{"b1", 0.02, 0.01}};
  Scenario base = flat_scenario({"b1"}, {{0.3, 0.2, 0.1}}, 4);

  KpiResult mean_mode = FeederSm(config).evaluate(base);
  double sum = 0.0;
  for (double v : mean_mode.vispf_series) sum += v;
  CHECK(mean_mode.y == doctest::Approx(sum / 4.0).epsilon(1e-12));

  config.aggregation = FeederConfig::Aggregation::kMin;
  KpiResult min_mode = FeederSm(config).evaluate(base);
  CHECK(min_mode.y ==
        *std::min_element(min_mode.vispf_series.begin(),
                          min_mode.vispf_series.end()));

  config.spf_mode = SpfMode::kTanh;
  KpiResult tanh_mode = FeederSm(config).evaluate(base);
  CHECK(tanh_mode.spf_series[0] ==
        doctest::Approx(std::abs(std::cos(std::tanh(0.3)))).epsilon(1e-12));
}

TEST_CASE("evaluation rejects malformed scenarios") {
  Fixture f = make_small_fixture();
  Scenario bad_handler = f.base;
  bad_handler.impacts.push_back(
      impact("regulator_settings", nlohmann::json::object()));
  CHECK_THROWS_AS(f.sm->evaluate(bad_handler), PreconditionError);
  CHECK_FALSE(f.sm->supports_handler("regulator_settings"));
  CHECK(f.sm->supports_handler("pv_disconnect"));

  Scenario bad_horizon = f.base;
  bad_horizon.horizon = f.base.horizon + 1;
  CHECK_THROWS_AS(f.sm->evaluate(bad_horizon), PreconditionError);

  Scenario bad_bus = f.base;
  bad_bus.impacts.push_back(impact("pv_disconnect", {{"bus", "ghost"}}));
  CHECK_THROWS_AS(f.sm->evaluate(bad_bus), PreconditionError);

  Scenario late = f.base;
  late.impacts.push_back(
      impact("pv_disconnect", {{"bus", "m1.b3"}},
             (f.base.horizon + 1) * f.base.profile->step_seconds));
  CHECK_THROWS_AS(f.sm->evaluate(late), PreconditionError);

  Scenario no_profile;
  no_profile.horizon = 4;
  CHECK_THROWS_AS(f.sm->evaluate(no_profile), PreconditionError);
}

TEST_CASE("evaluation is deterministic") {
  Fixture f = make_medium_fixture();
  Scenario attacked = f.base;
  attacked.impacts.push_back(impact(
      "load_scaling", {{"bus", "f1.b07"}, {"factor", 3.0}, {"phase", "a"}}));
  KpiResult one = f.sm->evaluate(attacked);
  KpiResult two = f.sm->evaluate(attacked);
  CHECK(one.vi_series == two.vi_series);
  CHECK(one.spf_series == two.spf_series);
  CHECK(one.vispf_series == two.vispf_series);
  CHECK(one.y == two.y);
}

TEST_CASE("feeder configuration JSON round trip") {
  Fixture f = make_medium_fixture();
  nlohmann::json doc = feeder_config_to_json(f.sm->config());
  FeederConfig restored = feeder_config_from_json(doc);
  CHECK(feeder_config_to_json(restored) == doc);
  CHECK(restored.feeder1.size() == 46);
  CHECK(restored.batteries.size() == 3);
  CHECK(restored.capacitors.size() == 4);
}

TEST_CASE("external simulator protocol: stdout JSON and exit status") {
  Fixture f = make_small_fixture();
  // The child validates it received a scenario document, then answers.
  SubprocessSm good(
      "python3 -c \"import json,sys; doc=json.load(sys.stdin); "
      "assert 'impacts' in doc; "
      "print(json.dumps({'y': 0.25, 'vi_series': [0.5], 'spf_series': "
      "[0.0], 'vispf_series': [0.25]}))\"",
      {"load_scaling"});
  KpiResult result = good.evaluate(f.base);
  CHECK(result.y == 0.25);
  CHECK(good.supports_handler("load_scaling"));
  CHECK_FALSE(good.supports_handler("pv_disconnect"));
  CHECK(good.id().rfind("cmd:python3", 0) == 0);

  SubprocessSm failing("cat > /dev/null; exit 3", {});
  CHECK_THROWS_AS(failing.evaluate(f.base), Error);
  SubprocessSm garbled("cat > /dev/null; echo not-json", {});
  CHECK_THROWS_AS(garbled.evaluate(f.base), Error);
}
