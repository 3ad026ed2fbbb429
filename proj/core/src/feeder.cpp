#include "asmkit/feeder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asmkit/errors.hpp"

namespace asmkit {

namespace {

const std::vector<std::string> kHandlers = {
    "pv_disconnect",         "pv_volt_breakpoints", "pv_unbalanced",
    "battery_mode_override", "battery_max_discharge", "battery_max_charge",
    "battery_settings",      "switch_topology",     "capacitor_curtailment",
    "load_scaling"};

// Per-step effective modifications derived from the active impact set.
struct BusEffects {
  double load_scale[3] = {1.0, 1.0, 1.0};
  bool pv_disconnected = false;
  double pv_q_frac = 0.0;   // PV reactive injection as a fraction of PV P
  double pv_skew = 0.0;     // fraction of phase b/c PV output moved to a
};

struct BatteryEffects {
  enum class Mode { kController, kCharge, kDischarge, kIdle };
  Mode mode = Mode::kController;
  bool force_max = false;
  double peak_threshold = 0.0;
  double valley_threshold = 0.0;
  double rated_power = 0.0;
};

int phase_index(const std::string& name) {
  if (name == "a") return 0;
  if (name == "b") return 1;
  if (name == "c") return 2;
  return -1;
}

}  // namespace

const std::vector<std::string>& feeder_supported_handlers() { return kHandlers; }

FeederSm::FeederSm(FeederConfig config) : config_(std::move(config)) {}

bool FeederSm::supports_handler(const std::string& handler) const {
  return std::find(kHandlers.begin(), kHandlers.end(), handler) !=
         kHandlers.end();
}

KpiResult FeederSm::evaluate(const Scenario& scenario) const {
  if (!scenario.profile) {
    throw PreconditionError("scenario has no operating profile");
  }
  const OperatingProfile& profile = *scenario.profile;
  const int horizon = scenario.horizon;
  if (horizon <= 0 || profile.horizon != horizon) {
    throw PreconditionError("profile/horizon mismatch");
  }
  for (const ImpactEvent& event : scenario.impacts) {
    if (!supports_handler(event.handler)) {
      throw PreconditionError("unsupported impact handler '" + event.handler +
                              "'");
    }
    if (event.schedule_time < 0.0 ||
        event.schedule_time > horizon * profile.step_seconds) {
      throw PreconditionError("impact scheduled outside the horizon",
                              event.action_id);
    }
  }

  // Bus id -> profile slot.
  std::map<std::string, std::size_t> profile_slot;
  for (std::size_t i = 0; i < profile.buses.size(); ++i) {
    const auto& series = profile.buses[i];
    for (int ph = 0; ph < 3; ++ph) {
      if (static_cast<int>(series.load_p[ph].size()) != horizon ||
          static_cast<int>(series.pv_p[ph].size()) != horizon) {
        throw PreconditionError("profile series does not cover the horizon",
                                series.bus);
      }
    }
    profile_slot[series.bus] = i;
  }

  std::map<std::string, std::size_t> battery_slot;
  for (std::size_t i = 0; i < config_.batteries.size(); ++i) {
    battery_slot[config_.batteries[i].id] = i;
  }
  std::map<std::string, std::size_t> capacitor_slot;
  for (std::size_t i = 0; i < config_.capacitors.size(); ++i) {
    capacitor_slot[config_.capacitors[i].id] = i;
  }
  std::map<std::string, std::size_t> bus_slot;  // position in chain tables
  std::vector<const FeederBus*> all_buses;
  for (const FeederBus& bus : config_.feeder1) {
    bus_slot[bus.id] = all_buses.size();
    all_buses.push_back(&bus);
  }
  for (const FeederBus& bus : config_.feeder2) {
    bus_slot[bus.id] = all_buses.size();
    all_buses.push_back(&bus);
  }

  // Battery energy state, persisted across steps.
  std::vector<double> soc_energy(config_.batteries.size());
  std::vector<BatteryConfig> battery_base = config_.batteries;
  if (scenario.initial_op.contains("batteries")) {
    for (const auto& [id, overrides] :
         scenario.initial_op["batteries"].items()) {
      auto it = battery_slot.find(id);
      if (it == battery_slot.end()) {
        throw PreconditionError("initial_op names unknown battery", id);
      }
      BatteryConfig& battery = battery_base[it->second];
      battery.peak_threshold =
          overrides.value("peak_threshold", battery.peak_threshold);
      battery.valley_threshold =
          overrides.value("valley_threshold", battery.valley_threshold);
      battery.initial_soc = overrides.value("initial_soc", battery.initial_soc);
    }
  }
  for (std::size_t i = 0; i < battery_base.size(); ++i) {
    soc_energy[i] = battery_base[i].initial_soc * battery_base[i].capacity;
  }
  const double dt_hours = profile.step_seconds / 3600.0;

  KpiResult result;
  result.vi_series.reserve(horizon);
  result.spf_series.reserve(horizon);
  result.vispf_series.reserve(horizon);

  for (int t = 0; t < horizon; ++t) {
    const double now = t * profile.step_seconds;

    // Effects active at this step.
    std::vector<BusEffects> bus_effects(all_buses.size());
    std::vector<BatteryEffects> battery_effects(battery_base.size());
    for (std::size_t i = 0; i < battery_base.size(); ++i) {
      battery_effects[i].peak_threshold = battery_base[i].peak_threshold;
      battery_effects[i].valley_threshold = battery_base[i].valley_threshold;
      battery_effects[i].rated_power = battery_base[i].rated_power;
    }
    std::vector<double> capacitor_factor(config_.capacitors.size(), 1.0);
    bool reconfigured = false;

    for (const ImpactEvent& event : scenario.impacts) {
      if (now < event.schedule_time) continue;
      if (event.parameters.contains("duration") &&
          now >= event.schedule_time +
                     event.parameters["duration"].get<double>()) {
        continue;
      }
      const nlohmann::json& params = event.parameters;
      auto target_bus = [&]() -> BusEffects& {
        const std::string bus = params.value("bus", std::string{});
        auto it = bus_slot.find(bus);
        if (it == bus_slot.end()) {
          throw PreconditionError(event.handler +
                                      " targets unknown bus '" + bus + "'",
                                  event.action_id);
        }
        return bus_effects[it->second];
      };
      auto target_battery = [&]() -> BatteryEffects& {
        const std::string id = params.value("battery", std::string{});
        auto it = battery_slot.find(id);
        if (it == battery_slot.end()) {
          throw PreconditionError(event.handler +
                                      " targets unknown battery '" + id + "'",
                                  event.action_id);
        }
        return battery_effects[it->second];
      };

      if (event.handler == "pv_disconnect") {
        target_bus().pv_disconnected = true;
      } else if (event.handler == "pv_volt_breakpoints") {
        target_bus().pv_q_frac = params.value("q_frac", -0.5);
      } else if (event.handler == "pv_unbalanced") {
        target_bus().pv_skew = params.value("skew", 1.0);
      } else if (event.handler == "battery_mode_override") {
        const std::string mode = params.value("mode", "idle");
        BatteryEffects& battery = target_battery();
        if (mode == "charge") battery.mode = BatteryEffects::Mode::kCharge;
        else if (mode == "discharge")
          battery.mode = BatteryEffects::Mode::kDischarge;
        else
          battery.mode = BatteryEffects::Mode::kIdle;
      } else if (event.handler == "battery_max_discharge") {
        BatteryEffects& battery = target_battery();
        battery.mode = BatteryEffects::Mode::kDischarge;
        battery.force_max = true;
      } else if (event.handler == "battery_max_charge") {
        BatteryEffects& battery = target_battery();
        battery.mode = BatteryEffects::Mode::kCharge;
        battery.force_max = true;
      } else if (event.handler == "battery_settings") {
        BatteryEffects& battery = target_battery();
        battery.peak_threshold =
            params.value("peak_threshold", battery.peak_threshold);
        battery.valley_threshold =
            params.value("valley_threshold", battery.valley_threshold);
        battery.rated_power = params.value("rated_power", battery.rated_power);
      } else if (event.handler == "switch_topology") {
        if (!config_.has_tie_switch) {
          throw PreconditionError("model has no tie switch", event.action_id);
        }
        reconfigured = true;
      } else if (event.handler == "capacitor_curtailment") {
        const std::string id = params.value("capacitor", std::string{});
        auto it = capacitor_slot.find(id);
        if (it == capacitor_slot.end()) {
          throw PreconditionError("capacitor_curtailment targets unknown "
                                  "capacitor '" + id + "'",
                                  event.action_id);
        }
        capacitor_factor[it->second] = params.value("factor", 0.0);
      } else if (event.handler == "load_scaling") {
        BusEffects& bus = target_bus();
        const double factor = params.value("factor", 1.0);
        const int phase = phase_index(params.value("phase", std::string{}));
        if (phase >= 0) {
          bus.load_scale[phase] *= factor;
        } else {
          for (double& scale : bus.load_scale) scale *= factor;
        }
      }
    }

    // Net per-bus per-phase injections (positive = consumption).
    std::vector<std::array<double, 3>> net_p(all_buses.size(), {0, 0, 0});
    std::vector<std::array<double, 3>> net_q(all_buses.size(), {0, 0, 0});
    for (std::size_t b = 0; b < all_buses.size(); ++b) {
      auto it = profile_slot.find(all_buses[b]->id);
      if (it == profile_slot.end()) continue;
      const BusProfile& series = profile.buses[it->second];
      const BusEffects& effects = bus_effects[b];
      double pv[3];
      for (int ph = 0; ph < 3; ++ph) {
        pv[ph] = effects.pv_disconnected ? 0.0 : series.pv_p[ph][t];
      }
      if (effects.pv_skew > 0.0) {
        const double moved = effects.pv_skew * (pv[1] + pv[2]);
        pv[0] += moved;
        pv[1] *= (1.0 - effects.pv_skew);
        pv[2] *= (1.0 - effects.pv_skew);
      }
      for (int ph = 0; ph < 3; ++ph) {
        const double load = series.load_p[ph][t] * effects.load_scale[ph];
        net_p[b][ph] = load - pv[ph];
        net_q[b][ph] = load * series.load_q_ratio - effects.pv_q_frac * pv[ph];
      }
    }
    for (std::size_t c = 0; c < config_.capacitors.size(); ++c) {
      auto it = bus_slot.find(config_.capacitors[c].bus);
      if (it == bus_slot.end()) continue;
      const double per_phase =
          config_.capacitors[c].q_injection * capacitor_factor[c] / 3.0;
      for (int ph = 0; ph < 3; ++ph) net_q[it->second][ph] -= per_phase;
    }

    // Battery dispatch against the pre-battery substation in-feed.
    double p_pre = 0.0;
    for (const auto& p : net_p) p_pre += p[0] + p[1] + p[2];
    for (std::size_t i = 0; i < battery_base.size(); ++i) {
      const BatteryConfig& battery = battery_base[i];
      const BatteryEffects& effects = battery_effects[i];
      double power = 0.0;  // positive = discharge
      switch (effects.mode) {
        case BatteryEffects::Mode::kIdle:
          break;
        case BatteryEffects::Mode::kDischarge:
          power = effects.rated_power;
          break;
        case BatteryEffects::Mode::kCharge:
          power = -effects.rated_power;
          break;
        case BatteryEffects::Mode::kController:
          if (p_pre > effects.peak_threshold) {
            power = std::min(effects.rated_power, p_pre - effects.peak_threshold);
          } else if (p_pre < effects.valley_threshold) {
            power = -std::min(effects.rated_power,
                              effects.valley_threshold - p_pre);
          }
          break;
      }
      // Energy limits.
      if (power > 0.0) {
        power = std::min(power, soc_energy[i] / dt_hours);
      } else if (power < 0.0) {
        power = -std::min(-power,
                          (battery.capacity - soc_energy[i]) / dt_hours);
      }
      soc_energy[i] -= power * dt_hours;
      soc_energy[i] = std::clamp(soc_energy[i], 0.0, battery.capacity);
      auto it = bus_slot.find(battery.bus);
      if (it != bus_slot.end() && power != 0.0) {
        for (int ph = 0; ph < 3; ++ph) net_p[it->second][ph] -= power / 3.0;
      }
    }

    // Linearized per-phase voltage drop along the radial chains.
    const std::size_t n1 = config_.feeder1.size();
    const std::size_t n2 = config_.feeder2.size();
    std::vector<std::array<double, 3>> voltages(all_buses.size(),
                                                {1.0, 1.0, 1.0});
    auto solve_chain = [&](const std::vector<std::size_t>& order,
                           const std::vector<std::pair<double, double>>& z) {
      for (int ph = 0; ph < 3; ++ph) {
        // Downstream flow through the edge feeding order[i].
        std::vector<double> flow_p(order.size()), flow_q(order.size());
        double acc_p = 0.0, acc_q = 0.0;
        for (std::size_t i = order.size(); i-- > 0;) {
          acc_p += net_p[order[i]][ph];
          acc_q += net_q[order[i]][ph];
          flow_p[i] = acc_p;
          flow_q[i] = acc_q;
        }
        double v = 1.0;
        for (std::size_t i = 0; i < order.size(); ++i) {
          v -= z[i].first * flow_p[i] + z[i].second * flow_q[i];
          voltages[order[i]][ph] = v;
        }
      }
    };

    std::vector<std::size_t> chain1(n1);
    std::vector<std::pair<double, double>> z1(n1);
    for (std::size_t i = 0; i < n1; ++i) {
      chain1[i] = i;
      z1[i] = {config_.feeder1[i].r, config_.feeder1[i].x};
    }
    if (!reconfigured) {
      std::vector<std::size_t> chain2(n2);
      std::vector<std::pair<double, double>> z2(n2);
      for (std::size_t i = 0; i < n2; ++i) {
        chain2[i] = n1 + i;
        z2[i] = {config_.feeder2[i].r, config_.feeder2[i].x};
      }
      solve_chain(chain1, z1);
      solve_chain(chain2, z2);
    } else {
      // Feeder 2 fed through feeder 1's end via the tie, far bus first.
      std::vector<std::size_t> chain = chain1;
      std::vector<std::pair<double, double>> z = z1;
      for (std::size_t i = n2; i-- > 0;) {
        chain.push_back(n1 + i);
        if (i + 1 == n2) {
          z.push_back({config_.tie_r, config_.tie_x});
        } else {
          // The edge between bus i and i+1 is the one that fed bus i+1.
          z.push_back({config_.feeder2[i + 1].r, config_.feeder2[i + 1].x});
        }
      }
      solve_chain(chain, z);
    }

    double p_ss = 0.0, q_ss = 0.0;
    for (const auto& p : net_p) p_ss += p[0] + p[1] + p[2];
    for (const auto& q : net_q) q_ss += q[0] + q[1] + q[2];

    const double vi = compute_vi(voltages);
    const double spf =
        compute_spf(p_ss, q_ss, config_.spf_mode, &result.pure_reactive);
    const double vispf = compute_vispf(vi, spf, &result.clamped);
    result.vi_series.push_back(vi);
    result.spf_series.push_back(spf);
    result.vispf_series.push_back(vispf);
  }

  if (config_.aggregation == FeederConfig::Aggregation::kMean) {
    result.y = std::accumulate(result.vispf_series.begin(),
                               result.vispf_series.end(), 0.0) /
               static_cast<double>(horizon);
  } else {
    result.y = *std::min_element(result.vispf_series.begin(),
                                 result.vispf_series.end());
  }
  return result;
}

nlohmann::json feeder_config_to_json(const FeederConfig& config) {
  auto buses = [](const std::vector<FeederBus>& feeder) {
    nlohmann::json out = nlohmann::json::array();
    for (const FeederBus& bus : feeder) {
      out.push_back({{"id", bus.id}, {"r", bus.r}, {"x", bus.x}});
    }
    return out;
  };
  nlohmann::json batteries = nlohmann::json::array();
  for (const BatteryConfig& battery : config.batteries) {
    batteries.push_back({{"id", battery.id},
                         {"bus", battery.bus},
                         {"rated_power", battery.rated_power},
                         {"capacity", battery.capacity},
                         {"initial_soc", battery.initial_soc},
                         {"peak_threshold", battery.peak_threshold},
                         {"valley_threshold", battery.valley_threshold}});
  }
  nlohmann::json capacitors = nlohmann::json::array();
  for (const CapacitorConfig& capacitor : config.capacitors) {
    capacitors.push_back({{"id", capacitor.id},
                          {"bus", capacitor.bus},
                          {"q_injection", capacitor.q_injection}});
  }
  return {{"feeder1", buses(config.feeder1)},
          {"feeder2", buses(config.feeder2)},
          {"batteries", batteries},
          {"capacitors", capacitors},
          {"has_tie_switch", config.has_tie_switch},
          {"tie_r", config.tie_r},
          {"tie_x", config.tie_x},
          {"spf_mode", config.spf_mode == SpfMode::kArctan ? "arctan" : "tanh"},
          {"aggregation",
           config.aggregation == FeederConfig::Aggregation::kMean ? "mean"
                                                                  : "min"}};
}

FeederConfig feeder_config_from_json(const nlohmann::json& doc) {
  FeederConfig config;
  auto buses = [](const nlohmann::json& arr) {
    std::vector<FeederBus> out;
    for (const auto& entry : arr) {
      FeederBus bus;
      bus.id = entry.at("id").get<std::string>();
      bus.r = entry.value("r", bus.r);
      bus.x = entry.value("x", bus.x);
      out.push_back(std::move(bus));
    }
    return out;
  };
  config.feeder1 = buses(doc.value("feeder1", nlohmann::json::array()));
  config.feeder2 = buses(doc.value("feeder2", nlohmann::json::array()));
  for (const auto& entry : doc.value("batteries", nlohmann::json::array())) {
    BatteryConfig battery;
    battery.id = entry.at("id").get<std::string>();
    battery.bus = entry.at("bus").get<std::string>();
    battery.rated_power = entry.value("rated_power", battery.rated_power);
    battery.capacity = entry.value("capacity", battery.capacity);
    battery.initial_soc = entry.value("initial_soc", battery.initial_soc);
    battery.peak_threshold =
        entry.value("peak_threshold", battery.peak_threshold);
    battery.valley_threshold =
        entry.value("valley_threshold", battery.valley_threshold);
    config.batteries.push_back(std::move(battery));
  }
  for (const auto& entry : doc.value("capacitors", nlohmann::json::array())) {
    CapacitorConfig capacitor;
    capacitor.id = entry.at("id").get<std::string>();
    capacitor.bus = entry.at("bus").get<std::string>();
    capacitor.q_injection = entry.value("q_injection", capacitor.q_injection);
    config.capacitors.push_back(std::move(capacitor));
  }
  config.has_tie_switch = doc.value("has_tie_switch", config.has_tie_switch);
  config.tie_r = doc.value("tie_r", config.tie_r);
  config.tie_x = doc.value("tie_x", config.tie_x);
  if (doc.value("spf_mode", "arctan") == std::string("tanh")) {
    config.spf_mode = SpfMode::kTanh;
  }
  if (doc.value("aggregation", "mean") == std::string("min")) {
    config.aggregation = FeederConfig::Aggregation::kMin;
  }
  return config;
}

}  // namespace asmkit
