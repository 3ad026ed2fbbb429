#include "asmkit/fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "asmkit/errors.hpp"
#include "asmkit/netjson.hpp"

namespace asmkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

ActionSpec access_action(std::string id, double cost, bool entry) {
  ActionSpec action;
  action.id = std::move(id);
  action.action_type = entry ? "remote_access" : "lateral_access";
  action.category = ActionCategory::kAccess;
  action.cost = cost;
  action.entry_point = entry;
  return action;
}

ActionSpec exploit_action(std::string id, double cost,
                          std::vector<std::string> unlocked,
                          std::vector<std::string> revealed) {
  ActionSpec action;
  action.id = std::move(id);
  action.action_type = "privilege_escalation";
  action.category = ActionCategory::kExploit;
  action.cost = cost;
  action.unlocked_impacts = std::move(unlocked);
  action.revealed_devices = std::move(revealed);
  return action;
}

ActionSpec impact_action(std::string id, double cost, std::string handler,
                         nlohmann::json parameters,
                         std::optional<DevicePair> logical_link = {},
                         double schedule_time = 0.0) {
  ActionSpec action;
  action.id = std::move(id);
  action.action_type = logical_link ? "false_data_injection"
                                    : "malicious_control";
  action.category = ActionCategory::kImpact;
  action.cost = cost;
  action.impact_handler = ImpactHandlerSpec{std::move(handler),
                                            std::move(parameters)};
  action.schedule_time = schedule_time;
  action.logical_link = std::move(logical_link);
  return action;
}

// Deterministic synthetic profile: mildly unbalanced diurnal-ish loads and
// a midday PV hump, no randomness anywhere.
std::shared_ptr<OperatingProfile> make_profile(
    const std::vector<std::string>& buses, int horizon, double step_seconds,
    const std::map<std::string, double>& base_load,
    const std::map<std::string, double>& pv_cap) {
  static const double kWeights[3] = {1.04, 1.0, 0.96};
  auto profile = std::make_shared<OperatingProfile>();
  profile->horizon = horizon;
  profile->step_seconds = step_seconds;
  for (std::size_t b = 0; b < buses.size(); ++b) {
    BusProfile series;
    series.bus = buses[b];
    const double load =
        base_load.count(buses[b]) ? base_load.at(buses[b]) : 0.0;
    const double pv = pv_cap.count(buses[b]) ? pv_cap.at(buses[b]) : 0.0;
    const double phase_shift = 0.3 * static_cast<double>(b % 7);
    for (int ph = 0; ph < 3; ++ph) {
      series.load_p[ph].resize(horizon);
      series.pv_p[ph].resize(horizon);
      for (int t = 0; t < horizon; ++t) {
        const double u = static_cast<double>(t) / horizon;
        series.load_p[ph][t] = load / 3.0 * kWeights[ph] *
                               (1.0 + 0.15 * std::sin(2.0 * kPi * u +
                                                      phase_shift));
        series.pv_p[ph][t] =
            pv / 3.0 * std::max(0.0, std::sin(kPi * u));
      }
    }
    profile->buses.push_back(std::move(series));
  }
  return profile;
}

void register_types(Ci& ci) {
  for (const DeviceSpec& device : ci.devices) {
    ci.type_registry.insert(device.device_type);
  }
}

std::string pad2(const char* stem, int n) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%02d", stem, n);
  return buf;
}

// Six-bus model shared by the micro and small fixtures.
FeederConfig micro_feeder_config() {
  FeederConfig config;
  for (int i = 1; i <= 3; ++i) {
    config.feeder1.push_back({"m1.b" + std::to_string(i), 0.02, 0.02});
    config.feeder2.push_back({"m2.b" + std::to_string(i), 0.02, 0.02});
  }
  config.batteries.push_back({"bat_1", "m1.b2", 0.05, 0.05, 0.5, 9.0, -9.0});
  config.capacitors.push_back({"cap_1", "m2.b2", 0.06});
  return config;
}

Scenario micro_base_scenario(const FeederConfig& config) {
  std::vector<std::string> buses;
  std::map<std::string, double> load, pv;
  for (const FeederBus& bus : config.feeder1) buses.push_back(bus.id);
  for (const FeederBus& bus : config.feeder2) buses.push_back(bus.id);
  for (const std::string& bus : buses) load[bus] = 0.3;
  pv["m1.b3"] = 0.12;
  pv["m2.b3"] = 0.12;
  Scenario base;
  base.profile = make_profile(buses, 24, 60.0, load, pv);
  base.horizon = 24;
  base.initial_op = nlohmann::json::object();
  return base;
}

Fixture micro_variant0() {
  Fixture fixture;
  DeviceSpec lc1{"lc1", "load_controller", {}};
  lc1.actions.push_back(access_action("lc1.access", 2.0, false));
  lc1.actions.push_back(
      exploit_action("lc1.exploit", 3.0, {"lc1.pv_off"}, {"cc"}));
  lc1.actions.push_back(impact_action("lc1.pv_off", 2.0, "pv_disconnect",
                                      {{"bus", "m1.b3"}}));
  DeviceSpec cc{"cc", "workstation", {}};

  NetworkLinkSpec l1;
  l1.id = "l1";
  l1.endpoints = {"lc1", "cc"};
  l1.logical_links = {{"lc1", "cc"}};
  l1.actions.push_back(access_action("l1.access", 4.0, true));
  l1.actions.push_back(impact_action(
      "l1.fdi_shed", 3.0, "load_scaling",
      {{"bus", "m1.b2"}, {"factor", 0.2}}, DevicePair{"lc1", "cc"}));
  l1.actions.push_back(impact_action(
      "l1.fdi_surge", 3.0, "load_scaling",
      {{"bus", "m1.b2"}, {"factor", 2.5}, {"phase", "a"}},
      DevicePair{"lc1", "cc"}));

  fixture.ci.devices = {lc1, cc};
  fixture.ci.links = {l1};
  register_types(fixture.ci);
  fixture.ci.finalize();
  FeederConfig config = micro_feeder_config();
  fixture.base = micro_base_scenario(config);
  fixture.sm = std::make_shared<FeederSm>(std::move(config));
  fixture.budget = 12.0;
  return fixture;
}

Fixture micro_variant1() {
  Fixture fixture;
  DeviceSpec ws1{"ws1", "workstation", {}};
  ws1.actions.push_back(access_action("ws1.access", 3.0, true));
  ws1.actions.push_back(exploit_action("ws1.exploit", 3.0, {}, {"lc1", "lc2"}));
  DeviceSpec lc1{"lc1", "load_controller", {}};
  lc1.actions.push_back(access_action("lc1.access", 2.0, false));
  lc1.actions.push_back(exploit_action("lc1.exploit", 2.0, {"lc1.imp"}, {}));
  lc1.actions.push_back(impact_action(
      "lc1.imp", 3.0, "load_scaling",
      {{"bus", "m1.b3"}, {"factor", 3.0}, {"phase", "b"}}));
  DeviceSpec lc2{"lc2", "load_controller", {}};
  lc2.actions.push_back(access_action("lc2.access", 2.0, false));
  lc2.actions.push_back(exploit_action("lc2.exploit", 2.0, {"lc2.imp"}, {}));
  lc2.actions.push_back(
      impact_action("lc2.imp", 3.0, "pv_disconnect", {{"bus", "m2.b3"}}));

  NetworkLinkSpec l1{"l1", {"ws1", "lc1"}, {}, {}};
  NetworkLinkSpec l2{"l2", {"ws1", "lc2"}, {}, {}};

  fixture.ci.devices = {ws1, lc1, lc2};
  fixture.ci.links = {l1, l2};
  register_types(fixture.ci);
  fixture.ci.finalize();
  FeederConfig config = micro_feeder_config();
  fixture.base = micro_base_scenario(config);
  fixture.sm = std::make_shared<FeederSm>(std::move(config));
  fixture.budget = 13.0;
  return fixture;
}

Fixture micro_variant2() {
  Fixture fixture;
  DeviceSpec lc1{"lc1", "load_controller", {}};
  DeviceSpec lc2{"lc2", "load_controller", {}};
  DeviceSpec cc{"cc", "workstation", {}};

  NetworkLinkSpec la;
  la.id = "la";
  la.endpoints = {"lc1", "cc"};
  la.logical_links = {{"lc1", "cc"}};
  la.actions.push_back(access_action("la.access", 2.0, true));
  la.actions.push_back(impact_action(
      "la.fdi", 3.0, "load_scaling",
      {{"bus", "m1.b2"}, {"factor", 1.8}, {"phase", "a"}},
      DevicePair{"lc1", "cc"}));
  NetworkLinkSpec lb;
  lb.id = "lb";
  lb.endpoints = {"lc2", "cc"};
  lb.logical_links = {{"lc2", "cc"}};
  lb.actions.push_back(access_action("lb.access", 6.0, true));
  lb.actions.push_back(impact_action(
      "lb.fdi", 5.0, "load_scaling",
      {{"bus", "m2.b2"}, {"factor", 3.5}, {"phase", "a"}},
      DevicePair{"lc2", "cc"}));

  fixture.ci.devices = {lc1, lc2, cc};
  fixture.ci.links = {la, lb};
  register_types(fixture.ci);
  fixture.ci.finalize();
  FeederConfig config = micro_feeder_config();
  fixture.base = micro_base_scenario(config);
  fixture.sm = std::make_shared<FeederSm>(std::move(config));
  fixture.budget = 11.0;
  return fixture;
}

}  // namespace

Fixture make_micro_fixture(int variant) {
  switch (variant) {
    case 0: return micro_variant0();
    case 1: return micro_variant1();
    case 2: return micro_variant2();
    default:
      throw ReferenceError("unknown micro fixture variant " +
                           std::to_string(variant));
  }
}

Fixture make_small_fixture() {
  Fixture fixture;
  DeviceSpec lc_a{"lc_a", "load_controller", {}};
  lc_a.actions.push_back(access_action("lc_a.access", 2.0, false));
  lc_a.actions.push_back(
      exploit_action("lc_a.exploit", 4.0, {"lc_a.pv_off"}, {"cc"}));
  lc_a.actions.push_back(impact_action("lc_a.pv_off", 2.0, "pv_disconnect",
                                       {{"bus", "m1.b3"}}));
  DeviceSpec lc_b{"lc_b", "load_controller", {}};
  lc_b.actions.push_back(access_action("lc_b.access", 2.0, true));
  lc_b.actions.push_back(exploit_action("lc_b.exploit", 4.0, {}, {"cc"}));
  DeviceSpec cc{"cc", "workstation", {}};

  NetworkLinkSpec link_a;
  link_a.id = "link_a";
  link_a.endpoints = {"lc_a", "cc"};
  link_a.logical_links = {{"lc_a", "cc"}};
  link_a.actions.push_back(access_action("link_a.access", 3.0, true));
  link_a.actions.push_back(impact_action(
      "link_a.fdi", 4.0, "load_scaling", {{"bus", "m1.b2"}, {"factor", 0.5}},
      DevicePair{"lc_a", "cc"}));
  NetworkLinkSpec link_b;
  link_b.id = "link_b";
  link_b.endpoints = {"lc_b", "cc"};
  link_b.logical_links = {{"lc_b", "cc"}};
  link_b.actions.push_back(access_action("link_b.access", 3.0, true));
  link_b.actions.push_back(impact_action(
      "link_b.fdi", 4.0, "load_scaling",
      {{"bus", "m2.b2"}, {"factor", 2.0}, {"phase", "a"}},
      DevicePair{"lc_b", "cc"}));

  fixture.ci.devices = {lc_a, lc_b, cc};
  fixture.ci.links = {link_a, link_b};
  register_types(fixture.ci);
  fixture.ci.finalize();
  FeederConfig config = micro_feeder_config();
  fixture.base = micro_base_scenario(config);
  fixture.sm = std::make_shared<FeederSm>(std::move(config));
  fixture.budget = 12.0;
  return fixture;
}

Fixture make_medium_fixture() {
  Fixture fixture;
  Ci& ci = fixture.ci;

  // Inventory: 47 routers, 2 firewalls, 5 workstations, 1 switch
  // controller, 3 battery and 4 capacitor controllers, 91 load controllers
  // and 91 PV inverters (244 devices in total).
  auto add_device = [&](std::string id, std::string type) {
    ci.devices.push_back(DeviceSpec{std::move(id), std::move(type), {}});
  };
  add_device("rtr_sub_1", "router");
  add_device("rtr_sub_2", "router");
  for (int j = 1; j <= 45; ++j) add_device(pad2("rtr_edge_", j), "router");
  add_device("fw_1", "firewall");
  add_device("fw_2", "firewall");
  for (int i = 1; i <= 5; ++i)
    add_device("ws_" + std::to_string(i), "workstation");
  add_device("swc_1", "switch_controller");
  for (int i = 1; i <= 3; ++i)
    add_device("bess_" + std::to_string(i), "battery_controller");
  for (int i = 1; i <= 4; ++i)
    add_device("cap_" + std::to_string(i), "capacitor_controller");
  for (int k = 1; k <= 91; ++k) add_device(pad2("lc_", k), "load_controller");
  for (int k = 1; k <= 91; ++k) add_device(pad2("pvi_", k), "pv_inverter");

  // Field device -> hosting edge router (edge j serves lc/pvi j and j+45;
  // unit 91 hangs off edge 1 again).
  auto edge_of = [](int k) { return ((k - 1) % 45) + 1; };
  // Field device -> feeder bus.
  auto bus_of = [&](int k) {
    return k <= 46 ? pad2("f1.b", k) : pad2("f2.b", k - 46);
  };

  auto add_link = [&](std::string id, std::string a, std::string b) {
    NetworkLinkSpec link;
    link.id = std::move(id);
    link.endpoints = {std::move(a), std::move(b)};
    ci.links.push_back(std::move(link));
    return ci.links.size() - 1;
  };

  for (int i = 1; i <= 5; ++i) {
    add_link("lan_ws_" + std::to_string(i), "ws_" + std::to_string(i), "fw_1");
  }
  add_link("lan_fw1", "fw_1", "rtr_sub_1");
  add_link("bb_fw2_a", "rtr_sub_1", "fw_2");
  add_link("bb_fw2_b", "fw_2", "rtr_sub_2");
  std::vector<std::size_t> uplinks(46, 0);
  for (int j = 1; j <= 45; ++j) {
    uplinks[j] = add_link(pad2("up_edge_", j), pad2("rtr_edge_", j),
                          j <= 23 ? "rtr_sub_1" : "rtr_sub_2");
  }
  std::map<int, std::size_t> lc_field, pvi_field;
  for (int k = 1; k <= 91; ++k) {
    lc_field[k] =
        add_link(pad2("fl_lc_", k), pad2("lc_", k), pad2("rtr_edge_", edge_of(k)));
    pvi_field[k] = add_link(pad2("fl_pvi_", k), pad2("pvi_", k),
                            pad2("rtr_edge_", edge_of(k)));
  }
  const int bess_edge[3] = {5, 15, 25};
  const char* bess_bus[3] = {"f1.b10", "f1.b30", "f2.b20"};
  for (int i = 0; i < 3; ++i) {
    add_link("up_bess_" + std::to_string(i + 1), "bess_" + std::to_string(i + 1),
             pad2("rtr_edge_", bess_edge[i]));
  }
  const int cap_edge[4] = {30, 35, 40, 44};
  const char* cap_bus[4] = {"f1.b40", "f2.b10", "f2.b30", "f2.b40"};
  for (int i = 0; i < 4; ++i) {
    add_link("up_cap_" + std::to_string(i + 1), "cap_" + std::to_string(i + 1),
             pad2("rtr_edge_", cap_edge[i]));
  }
  add_link("up_swc", "swc_1", "rtr_sub_1");

  // Control traffic flows from every field controller to the primary
  // operator workstation; derive the per-link logical links from that.
  std::vector<std::string> sources;
  for (int k = 1; k <= 91; ++k) sources.push_back(pad2("lc_", k));
  for (int k = 1; k <= 91; ++k) sources.push_back(pad2("pvi_", k));
  for (int i = 1; i <= 3; ++i) sources.push_back("bess_" + std::to_string(i));
  for (int i = 1; i <= 4; ++i) sources.push_back("cap_" + std::to_string(i));
  sources.push_back("swc_1");
  LinkGraph graph;
  for (const DeviceSpec& device : ci.devices) graph.nodes.push_back(device.id);
  for (const NetworkLinkSpec& link : ci.links) {
    graph.edges.push_back({link.id, link.endpoints.first,
                           link.endpoints.second});
  }
  auto derived = derive_logical_links(graph, sources, {"ws_1"});
  for (NetworkLinkSpec& link : ci.links) {
    auto it = derived.find(link.id);
    if (it != derived.end()) link.logical_links = it->second;
  }

  // Actions. Firewalled LAN and backbone links stay action-free; entry is
  // possible on every field link, edge uplink and controller uplink.
  auto device_by_id = [&](const std::string& id) -> DeviceSpec& {
    for (DeviceSpec& device : ci.devices) {
      if (device.id == id) return device;
    }
    throw ReferenceError("fixture device lookup failed", id);
  };
  auto link_ref = [&](std::size_t index) -> NetworkLinkSpec& {
    return ci.links[index];
  };

  for (int k = 1; k <= 91; ++k) {
    NetworkLinkSpec& fl = link_ref(lc_field[k]);
    fl.actions.push_back(access_action(fl.id + ".access", 8.0, true));
    fl.actions.push_back(impact_action(
        fl.id + ".fdi", 6.0, "load_scaling",
        {{"bus", bus_of(k)}, {"factor", 2.0}, {"phase", "a"}},
        DevicePair{pad2("lc_", k), "ws_1"}));
    NetworkLinkSpec& fp = link_ref(pvi_field[k]);
    fp.actions.push_back(access_action(fp.id + ".access", 8.0, true));
    fp.actions.push_back(impact_action(
        fp.id + ".fdi", 6.0, "pv_volt_breakpoints",
        {{"bus", bus_of(k)}, {"q_frac", -0.6}},
        DevicePair{pad2("pvi_", k), "ws_1"}));
  }

  for (int j = 1; j <= 45; ++j) {
    NetworkLinkSpec& up = link_ref(uplinks[j]);
    up.actions.push_back(access_action(up.id + ".access", 12.0, true));
    for (const DevicePair& pair : up.logical_links) {
      const std::string& src = pair.first;
      if (src.rfind("lc_", 0) == 0) {
        const int k = std::stoi(src.substr(3));
        up.actions.push_back(impact_action(
            up.id + ".fdi_" + src, 6.0, "load_scaling",
            {{"bus", bus_of(k)}, {"factor", 3.0}, {"phase", "a"}}, pair));
      } else if (src.rfind("pvi_", 0) == 0) {
        const int k = std::stoi(src.substr(4));
        up.actions.push_back(impact_action(
            up.id + ".fdi_" + src, 6.0, "pv_volt_breakpoints",
            {{"bus", bus_of(k)}, {"q_frac", -0.8}}, pair));
      } else if (src.rfind("bess_", 0) == 0) {
        up.actions.push_back(impact_action(up.id + ".fdi_" + src, 6.0,
                                           "battery_max_charge",
                                           {{"battery", src}}, pair));
      } else if (src.rfind("cap_", 0) == 0) {
        up.actions.push_back(impact_action(
            up.id + ".fdi_" + src, 6.0, "capacitor_curtailment",
            {{"capacitor", src}, {"factor", 0.0}}, pair));
      }
    }
  }

  for (NetworkLinkSpec& link : ci.links) {
    if (link.id.rfind("up_bess_", 0) == 0) {
      const std::string bess = "bess_" + link.id.substr(8);
      link.actions.push_back(access_action(link.id + ".access", 10.0, true));
      link.actions.push_back(impact_action(
          link.id + ".charge", 6.0, "battery_max_charge", {{"battery", bess}},
          DevicePair{bess, "ws_1"}));
    } else if (link.id.rfind("up_cap_", 0) == 0) {
      const std::string cap = "cap_" + link.id.substr(7);
      link.actions.push_back(access_action(link.id + ".access", 10.0, true));
      link.actions.push_back(impact_action(
          link.id + ".curtail", 6.0, "capacitor_curtailment",
          {{"capacitor", cap}, {"factor", 0.0}}, DevicePair{cap, "ws_1"}));
    } else if (link.id == "up_swc") {
      link.actions.push_back(access_action("up_swc.access", 14.0, true));
      link.actions.push_back(impact_action(
          "up_swc.reconfigure", 10.0, "switch_topology",
          nlohmann::json::object(), DevicePair{"swc_1", "ws_1"}));
    }
  }

  // Host-level foothold chain on the first ten load controllers.
  for (int k = 1; k <= 10; ++k) {
    DeviceSpec& lc = device_by_id(pad2("lc_", k));
    const std::string imp_id = lc.id + ".override";
    lc.actions.push_back(access_action(lc.id + ".access", 3.0, false));
    lc.actions.push_back(exploit_action(lc.id + ".exploit", 5.0, {imp_id},
                                        {pad2("rtr_edge_", edge_of(k))}));
    lc.actions.push_back(impact_action(
        imp_id, 5.0, "load_scaling",
        {{"bus", bus_of(k)}, {"factor", 4.0}, {"phase", "a"}}));
  }

  register_types(ci);
  ci.finalize();

  // Two 46-bus feeders. The pair of oversized commercial loads behind
  // edge router 7 is what makes its uplink the standout target.
  FeederConfig config;
  for (int i = 1; i <= 46; ++i) {
    config.feeder1.push_back({pad2("f1.b", i), 0.003, 0.003});
    config.feeder2.push_back({pad2("f2.b", i), 0.003, 0.003});
  }
  for (int i = 0; i < 3; ++i) {
    config.batteries.push_back(
        {"bess_" + std::to_string(i + 1), bess_bus[i], 0.1, 0.2, 0.5, 9.0,
         -9.0});
  }
  for (int i = 0; i < 4; ++i) {
    config.capacitors.push_back(
        {"cap_" + std::to_string(i + 1), cap_bus[i], 0.12});
  }

  std::vector<std::string> buses;
  std::map<std::string, double> load, pv;
  for (const FeederBus& bus : config.feeder1) buses.push_back(bus.id);
  for (const FeederBus& bus : config.feeder2) buses.push_back(bus.id);
  for (const std::string& bus : buses) load[bus] = 0.06;
  load["f1.b07"] = 0.24;  // lc_07
  load["f2.b06"] = 0.24;  // lc_52
  for (int k = 1; k <= 91; ++k) pv[bus_of(k)] = 0.03;
  fixture.base.profile = make_profile(buses, 240, 60.0, load, pv);
  fixture.base.horizon = 240;
  fixture.base.initial_op = nlohmann::json::object();
  fixture.sm = std::make_shared<FeederSm>(std::move(config));
  fixture.budget = 30.0;
  return fixture;
}

Fixture make_fixture(const std::string& name) {
  if (name == "micro0") return make_micro_fixture(0);
  if (name == "micro1") return make_micro_fixture(1);
  if (name == "micro2") return make_micro_fixture(2);
  if (name == "small") return make_small_fixture();
  if (name == "medium") return make_medium_fixture();
  throw ReferenceError("unknown fixture '" + name + "'");
}

nlohmann::json fixture_netjson(const Fixture& fixture) {
  return ci_to_netjson(fixture.ci);
}

}  // namespace asmkit
