#include "asmkit/costs.hpp"

#include "asmkit/errors.hpp"

namespace asmkit {

std::map<std::string, double> import_direct_costs(
    const nlohmann::json& doc,
    const std::vector<std::string>& required_actions) {
  std::map<std::string, double> out;
  auto assign = [&](const std::string& id, double cost,
                    const std::string& origin) {
    if (cost < 0.0) {
      throw ParseError("negative cost in " + origin, id);
    }
    auto [it, inserted] = out.emplace(id, cost);
    if (!inserted && it->second != cost) {
      throw ParseError("conflicting cost assignments (" +
                           std::to_string(it->second) + " vs " +
                           std::to_string(cost) + ")",
                       id);
    }
  };

  // value() copies; bind the copies so items() does not reference a temporary.
  const nlohmann::json direct = doc.value("costs", nlohmann::json::object());
  const nlohmann::json groups = doc.value("groups", nlohmann::json::object());
  for (const auto& [id, value] : direct.items()) {
    if (!value.is_number()) throw ParseError("cost must be a number", id);
    assign(id, value.get<double>(), "costs");
  }
  for (const auto& [name, group] : groups.items()) {
    if (!group.contains("cost") || !group.contains("members")) {
      throw ParseError("group needs cost and members", name);
    }
    const double cost = group["cost"].get<double>();
    for (const auto& member : group["members"]) {
      assign(member.get<std::string>(), cost, "group '" + name + "'");
    }
  }

  for (const std::string& id : required_actions) {
    if (!out.contains(id)) {
      throw ReferenceError("action has no cost assignment", id);
    }
  }
  return out;
}

void apply_costs(Ci& ci, const std::map<std::string, double>& costs) {
  std::set<std::string> seen;
  auto patch = [&](ActionSpec& action) {
    auto it = costs.find(action.id);
    if (it == costs.end()) return;
    action.cost = it->second;
    seen.insert(action.id);
  };
  for (DeviceSpec& device : ci.devices) {
    for (ActionSpec& action : device.actions) patch(action);
  }
  for (NetworkLinkSpec& link : ci.links) {
    for (ActionSpec& action : link.actions) patch(action);
  }
  for (const auto& [id, cost] : costs) {
    if (!seen.contains(id)) {
      throw ReferenceError("cost map names unknown action", id);
    }
  }
  ci.finalize();
}

void apply_costs_to_document(nlohmann::json& doc,
                             const std::map<std::string, double>& costs) {
  std::set<std::string> seen;
  auto patch_list = [&](nlohmann::json& entity) {
    if (!entity.contains("properties")) return;
    nlohmann::json& properties = entity["properties"];
    if (!properties.contains("actions")) return;
    for (nlohmann::json& action : properties["actions"]) {
      auto it = costs.find(action.value("id", std::string{}));
      if (it == costs.end()) continue;
      action["cost"] = it->second;
      seen.insert(it->first);
    }
  };
  if (doc.contains("nodes")) {
    for (nlohmann::json& node : doc["nodes"]) patch_list(node);
  }
  if (doc.contains("links")) {
    for (nlohmann::json& link : doc["links"]) patch_list(link);
  }
  for (const auto& [id, cost] : costs) {
    if (!seen.contains(id)) {
      throw ReferenceError("cost map names unknown action", id);
    }
  }
}

}  // namespace asmkit
