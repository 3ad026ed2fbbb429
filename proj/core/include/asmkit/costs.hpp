#pragma once

#include <map>
#include <string>
#include <vector>

#include "asmkit/ci.hpp"
#include "json.hpp"

namespace asmkit {

// Directly assigned costs: per-action values plus named cost groups that
// expand to their members. Document shape:
//   { "costs": {"action_id": 6, ...},
//     "groups": {"name": {"cost": 14, "members": ["a", "b"]}, ...} }
// Every action in `required_actions` must end up with exactly one cost.
// Throws on negative costs, conflicting assignments and unassigned actions.
std::map<std::string, double> import_direct_costs(
    const nlohmann::json& doc,
    const std::vector<std::string>& required_actions);

// Applies a cost map to every matching action of a CI (by action id).
// Unknown ids in the map are an error; actions missing from the map keep
// their declared cost.
void apply_costs(Ci& ci, const std::map<std::string, double>& costs);

// Same, directly on a NetJSON document so unknown keys survive.
void apply_costs_to_document(nlohmann::json& doc,
                             const std::map<std::string, double>& costs);

}  // namespace asmkit
