#include <algorithm>

#include "asmkit/errors.hpp"
#include "asmkit/fixtures.hpp"
#include "asmkit/netjson.hpp"
#include "doctest.h"

using namespace asmkit;

namespace {

bool has_violation(const ValidationReport& report, const std::string& entity) {
  return std::any_of(report.violations.begin(), report.violations.end(),
                     [&](const Violation& v) { return v.entity_id == entity; });
}

}  // namespace

TEST_CASE("small fixture loads with M = 9") {
  Fixture fixture = make_small_fixture();
  Ci ci = load_ci({{"small", fixture_netjson(fixture)}});
  CHECK(ci.devices.size() == 3);
  CHECK(ci.links.size() == 2);
  CHECK(ci.action_count() == 9);
  // M equals the sum over per-entity action lists.
  std::size_t m = 0;
  for (const auto& d : ci.devices) m += d.actions.size();
  for (const auto& l : ci.links) m += l.actions.size();
  CHECK(m == 9);
  CHECK(validate_ci(ci).empty());
}

TEST_CASE("medium fixture mirrors the reference inventory") {
  Fixture fixture = make_medium_fixture();
  CHECK(fixture.ci.devices.size() == 244);
  auto count_type = [&](const std::string& type) {
    return std::count_if(
        fixture.ci.devices.begin(), fixture.ci.devices.end(),
        [&](const DeviceSpec& d) { return d.device_type == type; });
  };
  CHECK(count_type("router") == 47);
  CHECK(count_type("firewall") == 2);
  CHECK(count_type("workstation") == 5);
  CHECK(count_type("battery_controller") == 3);
  CHECK(count_type("capacitor_controller") == 4);
  CHECK(count_type("switch_controller") == 1);
  CHECK(count_type("load_controller") == 91);
  CHECK(count_type("pv_inverter") == 91);
  CHECK(validate_ci(fixture.ci).ok());
}

TEST_CASE("empty device list is rejected: no entry point") {
  nlohmann::json doc = {{"x_asm_schema", "1.0"},
                        {"nodes", nlohmann::json::array()},
                        {"links", nlohmann::json::array()}};
  CHECK_THROWS_AS(load_ci({{"empty", doc}}), Error);
}

TEST_CASE("schema version is enforced") {
  nlohmann::json doc = {{"nodes", nlohmann::json::array()}};
  CHECK_THROWS_AS(load_ci({{"noschema", doc}}), ParseError);
  doc["x_asm_schema"] = "9.9";
  CHECK_THROWS_AS(load_ci({{"badschema", doc}}), ParseError);
}

TEST_CASE("validate_ci reports constructed violations") {
  Fixture fixture = make_small_fixture();

  SUBCASE("link impact referencing a pair outside L") {
    Ci ci = fixture.ci;
    for (auto& link : ci.links) {
      for (auto& action : link.actions) {
        if (action.category == ActionCategory::kImpact) {
          action.logical_link = DevicePair{"lc_a", "lc_b"};
        }
      }
    }
    Ci rebuilt;
    rebuilt.devices = ci.devices;
    rebuilt.links = ci.links;
    rebuilt.type_registry = ci.type_registry;
    rebuilt.finalize();
    ValidationReport report = validate_ci(rebuilt);
    CHECK_FALSE(report.ok());
  }

  SUBCASE("dangling zeta reference") {
    Ci ci;
    ci.devices = fixture.ci.devices;
    ci.links = fixture.ci.links;
    ci.type_registry = fixture.ci.type_registry;
    for (auto& action : ci.devices[0].actions) {
      if (action.category == ActionCategory::kExploit) {
        action.unlocked_impacts = {"no_such_action"};
      }
    }
    ci.finalize();
    ValidationReport report = validate_ci(ci);
    CHECK_FALSE(report.ok());
  }

  SUBCASE("category/field mismatch: entry flag on an exploit") {
    Ci ci;
    ci.devices = fixture.ci.devices;
    ci.links = fixture.ci.links;
    ci.type_registry = fixture.ci.type_registry;
    for (auto& action : ci.devices[0].actions) {
      if (action.category == ActionCategory::kExploit) action.entry_point = true;
    }
    ci.finalize();
    CHECK_FALSE(validate_ci(ci).ok());
  }

  SUBCASE("negative cost") {
    Ci ci;
    ci.devices = fixture.ci.devices;
    ci.links = fixture.ci.links;
    ci.type_registry = fixture.ci.type_registry;
    ci.devices[0].actions[0].cost = -1.0;
    ci.finalize();
    CHECK(has_violation(validate_ci(ci), ci.devices[0].actions[0].id));
  }

  SUBCASE("unregistered device type") {
    Ci ci;
    ci.devices = fixture.ci.devices;
    ci.links = fixture.ci.links;
    ci.type_registry = fixture.ci.type_registry;
    ci.devices[0].device_type = "mystery_box";
    ci.finalize();
    CHECK(has_violation(validate_ci(ci), ci.devices[0].id));
  }

  SUBCASE("link access action must be an entry point") {
    Ci ci;
    ci.devices = fixture.ci.devices;
    ci.links = fixture.ci.links;
    ci.type_registry = fixture.ci.type_registry;
    for (auto& action : ci.links[0].actions) {
      if (action.category == ActionCategory::kAccess) action.entry_point = false;
    }
    ci.finalize();
    CHECK_FALSE(validate_ci(ci).ok());
  }
}

TEST_CASE("duplicate ids are rejected at finalize") {
  Fixture fixture = make_small_fixture();
  Ci ci;
  ci.devices = fixture.ci.devices;
  ci.links = fixture.ci.links;
  ci.type_registry = fixture.ci.type_registry;
  ci.devices.push_back(ci.devices[0]);
  CHECK_THROWS_AS(ci.finalize(), ReferenceError);
}

TEST_CASE("fingerprint is stable and content-sensitive") {
  Fixture a = make_small_fixture();
  Fixture b = make_small_fixture();
  CHECK(ci_fingerprint(a.ci) == ci_fingerprint(b.ci));
  b.ci.devices[0].actions[0].cost += 1.0;
  CHECK(ci_fingerprint(a.ci) != ci_fingerprint(b.ci));
}

TEST_CASE("netjson round trip preserves the CI") {
  for (const char* name : {"micro0", "micro1", "micro2", "small", "medium"}) {
    Fixture fixture = make_fixture(name);
    Ci reloaded = load_ci({{name, fixture_netjson(fixture)}});
    CHECK(ci_fingerprint(fixture.ci) == ci_fingerprint(reloaded));
  }
}

TEST_CASE("multi-document load merges devices and links") {
  Fixture fixture = make_small_fixture();
  nlohmann::json whole = fixture_netjson(fixture);
  nlohmann::json devices_doc = {{"x_asm_schema", "1.0"},
                                {"nodes", whole["nodes"]},
                                {"links", nlohmann::json::array()}};
  nlohmann::json links_doc = {{"x_asm_schema", "1.0"},
                              {"nodes", nlohmann::json::array()},
                              {"links", whole["links"]}};
  Ci merged = load_ci({{"devices", devices_doc}, {"links", links_doc}});
  CHECK(ci_fingerprint(merged) == ci_fingerprint(fixture.ci));
}

TEST_CASE("unknown extension keys survive document rewrites") {
  Fixture fixture = make_small_fixture();
  nlohmann::json doc = fixture_netjson(fixture);
  doc["x_custom_extension"] = {{"kept", true}};
  doc["links"][0]["properties"]["x_note"] = "hello";
  derive_logical_links_in_document(doc, {"lc_a", "lc_b"}, {"cc"});
  CHECK(doc["x_custom_extension"]["kept"] == true);
  CHECK(doc["links"][0]["properties"]["x_note"] == "hello");
}
