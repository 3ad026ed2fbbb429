#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asmkit/ci.hpp"
#include "json.hpp"

namespace asmkit {

// Per-bus operating inputs: per-phase active load and PV output series in
// per-unit, one sample per simulation step.
struct BusProfile {
  std::string bus;
  std::array<std::vector<double>, 3> load_p;
  std::array<std::vector<double>, 3> pv_p;
  double load_q_ratio = 0.3;  // Q = q_ratio * P for loads
};

struct OperatingProfile {
  std::vector<BusProfile> buses;
  int horizon = 0;        // number of steps
  double step_seconds = 60.0;
};

// One scheduled impact-category effect handed to the simulation model.
struct ImpactEvent {
  std::string handler;
  nlohmann::json parameters;
  std::optional<DevicePair> logical_link;
  double schedule_time = 0.0;  // seconds from horizon start
  std::string action_id;
};

// Everything the simulation model needs to score one attack scenario.
// The profile is shared: scenarios produced during a search differ only in
// their impact schedule.
struct Scenario {
  std::shared_ptr<const OperatingProfile> profile;
  std::vector<ImpactEvent> impacts;
  nlohmann::json initial_op;  // SM-specific initial device settings
  int horizon = 0;
};

struct KpiResult {
  std::vector<double> vi_series;
  std::vector<double> spf_series;
  std::vector<double> vispf_series;
  double y = 0.0;
  bool clamped = false;        // some VISPF sample needed clamping
  bool pure_reactive = false;  // some step had p_ss == 0
};

// Simulation-model contract: pure with respect to the scenario, safe to
// call concurrently.
class Sm {
 public:
  virtual ~Sm() = default;
  virtual KpiResult evaluate(const Scenario& scenario) const = 0;
  virtual bool supports_handler(const std::string& handler) const = 0;
  virtual std::string id() const = 0;
};

nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json kpi_to_json(const KpiResult& result);
KpiResult kpi_from_json(const nlohmann::json& doc);

// Collects the impact actions out of an executed-action log into a
// scenario, ordered by (schedule_time, action id).
Scenario build_scenario(const Ci& ci,
                        const std::vector<std::size_t>& action_log,
                        const Scenario& base);

}  // namespace asmkit
