#pragma once

#include <memory>
#include <string>

#include "asmkit/ci.hpp"
#include "asmkit/feeder.hpp"
#include "asmkit/scenario.hpp"

namespace asmkit {

// Bundled desk-scale fixtures: a CI, the matching feeder model and a base
// scenario with synthetic operating profiles, wired so CI impact actions
// target buses of the model.
struct Fixture {
  Ci ci;
  std::shared_ptr<FeederSm> sm;
  Scenario base;
  double budget = 0.0;
};

// Micro CIs with exhaustively enumerable feasible-sequence spaces, for
// optimality and scale-invariance checks. Variants 0..2 differ in shape
// (single link, fan-out with exploit chain, two entry points).
Fixture make_micro_fixture(int variant);

// 3 devices, 2 links, 9 actions; the small conformance fixture. Matches
// fixtures/feeder_small.netjson.
Fixture make_small_fixture();

// Mirrors the reference inventory: 47 routers, 2 firewalls, 5 workstations,
// 3 BESS, 4 capacitor banks, 1 switch controller, 91 load controllers and
// 91 PV inverters (244 devices) over a two-feeder model.
Fixture make_medium_fixture();

Fixture make_fixture(const std::string& name);  // micro0..2, small, medium

// NetJSON rendering of a fixture's CI (same document load_ci accepts).
nlohmann::json fixture_netjson(const Fixture& fixture);

}  // namespace asmkit
