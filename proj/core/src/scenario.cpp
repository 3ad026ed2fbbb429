#include "asmkit/scenario.hpp"

#include <algorithm>

#include "asmkit/cyber_engine.hpp"
#include "asmkit/errors.hpp"

namespace asmkit {

using nlohmann::json;

json scenario_to_json(const Scenario& scenario) {
  json doc;
  doc["horizon"] = scenario.horizon;
  doc["initial_op"] = scenario.initial_op;
  json impacts = json::array();
  for (const ImpactEvent& event : scenario.impacts) {
    json record;
    record["handler"] = event.handler;
    record["parameters"] = event.parameters;
    record["schedule_time"] = event.schedule_time;
    record["action_id"] = event.action_id;
    if (event.logical_link) {
      record["logical_link"] = {event.logical_link->first,
                                event.logical_link->second};
    }
    impacts.push_back(std::move(record));
  }
  doc["impacts"] = std::move(impacts);
  json buses = json::array();
  if (scenario.profile) {
    for (const BusProfile& bus : scenario.profile->buses) {
      buses.push_back({{"bus", bus.bus},
                       {"load_p", bus.load_p},
                       {"pv_p", bus.pv_p},
                       {"load_q_ratio", bus.load_q_ratio}});
    }
    doc["profile"] = {{"buses", std::move(buses)},
                      {"horizon", scenario.profile->horizon},
                      {"step_seconds", scenario.profile->step_seconds}};
  }
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  Scenario scenario;
  scenario.horizon = doc.value("horizon", 0);
  scenario.initial_op = doc.value("initial_op", json::object());
  for (const json& record : doc.value("impacts", json::array())) {
    ImpactEvent event;
    event.handler = record.at("handler").get<std::string>();
    event.parameters = record.value("parameters", json::object());
    event.schedule_time = record.value("schedule_time", 0.0);
    event.action_id = record.value("action_id", std::string{});
    if (record.contains("logical_link")) {
      event.logical_link = DevicePair{record["logical_link"][0],
                                      record["logical_link"][1]};
    }
    scenario.impacts.push_back(std::move(event));
  }
  if (doc.contains("profile")) {
    auto profile = std::make_shared<OperatingProfile>();
    const json& p = doc["profile"];
    profile->horizon = p.value("horizon", scenario.horizon);
    profile->step_seconds = p.value("step_seconds", 60.0);
    for (const json& bus : p.value("buses", json::array())) {
      BusProfile record;
      record.bus = bus.at("bus").get<std::string>();
      record.load_p = bus.at("load_p").get<std::array<std::vector<double>, 3>>();
      record.pv_p = bus.at("pv_p").get<std::array<std::vector<double>, 3>>();
      record.load_q_ratio = bus.value("load_q_ratio", 0.3);
      profile->buses.push_back(std::move(record));
    }
    scenario.profile = std::move(profile);
  }
  return scenario;
}

json kpi_to_json(const KpiResult& result) {
  return json{{"y", result.y},
              {"vi_series", result.vi_series},
              {"spf_series", result.spf_series},
              {"vispf_series", result.vispf_series},
              {"clamped", result.clamped},
              {"pure_reactive", result.pure_reactive}};
}

KpiResult kpi_from_json(const json& doc) {
  KpiResult result;
  result.y = doc.at("y").get<double>();
  result.vi_series = doc.value("vi_series", std::vector<double>{});
  result.spf_series = doc.value("spf_series", std::vector<double>{});
  result.vispf_series = doc.value("vispf_series", std::vector<double>{});
  result.clamped = doc.value("clamped", false);
  result.pure_reactive = doc.value("pure_reactive", false);
  return result;
}

Scenario build_scenario(const Ci& ci,
                        const std::vector<std::size_t>& action_log,
                        const Scenario& base) {
  Scenario scenario = base;
  scenario.impacts.clear();
  for (std::size_t index : action_log) {
    const ActionSpec& action = ci.action(index);
    if (action.category != ActionCategory::kImpact) continue;
    if (!action.impact_handler) {
      throw PreconditionError("impact action without a handler", action.id);
    }
    ImpactEvent event;
    event.handler = action.impact_handler->name;
    event.parameters = action.impact_handler->parameters;
    event.logical_link = action.logical_link;
    event.schedule_time = action.schedule_time;
    event.action_id = action.id;
    scenario.impacts.push_back(std::move(event));
  }
  std::sort(scenario.impacts.begin(), scenario.impacts.end(),
            [](const ImpactEvent& a, const ImpactEvent& b) {
              return std::tie(a.schedule_time, a.action_id) <
                     std::tie(b.schedule_time, b.action_id);
            });
  return scenario;
}

}  // namespace asmkit
