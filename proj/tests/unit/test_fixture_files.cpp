#include <string>

#include "asmkit/fixtures.hpp"
#include "asmkit/netjson.hpp"
#include "doctest.h"

using namespace asmkit;

TEST_CASE("the shipped small-layer file matches the built-in fixture") {
  const std::string path =
      std::string(ASMKIT_FIXTURE_DIR) + "/feeder_small.netjson";
  Ci ci = load_ci_files({path});
  CHECK(ci.action_count() == 9);
  CHECK(ci.devices.size() == 3);
  CHECK(ci.links.size() == 2);
  CHECK(ci_fingerprint(ci) == ci_fingerprint(make_small_fixture().ci));
}
