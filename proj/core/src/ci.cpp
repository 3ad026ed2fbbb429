#include "asmkit/ci.hpp"

#include <algorithm>
#include <set>

#include "asmkit/errors.hpp"

namespace asmkit {

std::string to_string(ActionCategory category) {
  switch (category) {
    case ActionCategory::kAccess:
      return "access";
    case ActionCategory::kExploit:
      return "exploit";
    case ActionCategory::kImpact:
      return "impact";
  }
  return "?";
}

std::optional<ActionCategory> parse_category(std::string_view name) {
  if (name == "access") return ActionCategory::kAccess;
  if (name == "exploit") return ActionCategory::kExploit;
  if (name == "impact") return ActionCategory::kImpact;
  return std::nullopt;
}

void Ci::finalize() {
  device_by_id_.clear();
  link_by_id_.clear();
  action_by_id_.clear();
  action_ids_.clear();
  owners_.clear();
  actions_by_id_.clear();

  for (std::size_t i = 0; i < devices.size(); ++i) {
    if (!device_by_id_.emplace(devices[i].id, i).second) {
      throw ReferenceError("duplicate device id", devices[i].id);
    }
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (!link_by_id_.emplace(links[i].id, i).second) {
      throw ReferenceError("duplicate link id", links[i].id);
    }
  }

  auto add_action = [&](const ActionSpec& action, ActionOwner owner) {
    if (!action_by_id_.emplace(action.id, action_ids_.size()).second) {
      throw ReferenceError("duplicate action id", action.id);
    }
    action_ids_.push_back(action.id);
    owners_.push_back(owner);
  };
  for (std::size_t i = 0; i < devices.size(); ++i) {
    for (std::size_t j = 0; j < devices[i].actions.size(); ++j) {
      add_action(devices[i].actions[j], ActionOwner{i, std::nullopt, j});
    }
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    for (std::size_t j = 0; j < links[i].actions.size(); ++j) {
      add_action(links[i].actions[j], ActionOwner{std::nullopt, i, j});
    }
  }

  actions_by_id_.resize(action_ids_.size());
  for (std::size_t i = 0; i < actions_by_id_.size(); ++i) actions_by_id_[i] = i;
  std::sort(actions_by_id_.begin(), actions_by_id_.end(),
            [&](std::size_t a, std::size_t b) {
              return action_ids_[a] < action_ids_[b];
            });
}

const ActionSpec& Ci::action(std::size_t index) const {
  const ActionOwner& o = owners_[index];
  if (o.device_index) return devices[*o.device_index].actions[o.slot];
  return links[*o.link_index].actions[o.slot];
}

std::optional<std::size_t> Ci::device_index(std::string_view id) const {
  auto it = device_by_id_.find(id);
  if (it == device_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Ci::link_index(std::string_view id) const {
  auto it = link_by_id_.find(id);
  if (it == link_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Ci::action_index(std::string_view id) const {
  auto it = action_by_id_.find(id);
  if (it == action_by_id_.end()) return std::nullopt;
  return it->second;
}

const ActionSpec* Ci::find_action(std::string_view id) const {
  auto index = action_index(id);
  return index ? &action(*index) : nullptr;
}

const DeviceSpec* Ci::find_device(std::string_view id) const {
  auto index = device_index(id);
  return index ? &devices[*index] : nullptr;
}

const NetworkLinkSpec* Ci::find_link(std::string_view id) const {
  auto index = link_index(id);
  return index ? &links[*index] : nullptr;
}

bool ValidationReport::ok() const {
  return std::none_of(violations.begin(), violations.end(),
                      [](const Violation& v) {
                        return v.severity == Violation::Severity::kError;
                      });
}

namespace {

void check_action(const Ci& ci, const ActionSpec& action, bool on_link,
                  const std::vector<DevicePair>* logical_links,
                  std::vector<Violation>& out) {
  auto error = [&](std::string message) {
    out.push_back({Violation::Severity::kError, action.id, std::move(message)});
  };

  if (action.cost < 0.0) error("negative cost");
  if (on_link && action.category == ActionCategory::kExploit) {
    error("exploit category is not allowed on a network link");
  }
  if (on_link && action.category == ActionCategory::kAccess &&
      !action.entry_point) {
    error("link access actions must be entry points");
  }
  if (action.category != ActionCategory::kAccess && action.entry_point) {
    error("entry_point is only meaningful for access actions");
  }
  if (action.category != ActionCategory::kExploit &&
      (!action.unlocked_impacts.empty() || !action.revealed_devices.empty())) {
    error("unlocked_impacts/revealed_devices are exploit-only fields");
  }
  if (action.category != ActionCategory::kImpact) {
    if (action.impact_handler) error("impact_handler on a non-impact action");
    if (action.logical_link) error("logical_link on a non-impact action");
  } else {
    if (!action.impact_handler) error("impact action without a handler");
    if (on_link) {
      if (!action.logical_link) {
        error("link impact action without a logical link");
      } else if (logical_links &&
                 std::find(logical_links->begin(), logical_links->end(),
                           *action.logical_link) == logical_links->end()) {
        error("impact action references a logical link the link does not carry");
      }
    } else if (action.logical_link) {
      error("device impact actions carry no logical link");
    }
  }

  for (const std::string& ref : action.unlocked_impacts) {
    const ActionSpec* target = ci.find_action(ref);
    if (!target) {
      error("unlocked impact references unknown action '" + ref + "'");
    } else if (target->category != ActionCategory::kImpact) {
      error("unlocked impact '" + ref + "' is not an impact action");
    }
  }
  for (const std::string& ref : action.revealed_devices) {
    if (!ci.find_device(ref)) {
      error("revealed device references unknown device '" + ref + "'");
    }
  }
}

}  // namespace

ValidationReport validate_ci(const Ci& ci) {
  ValidationReport report;
  auto& out = report.violations;

  std::set<std::string> device_ids;
  for (const DeviceSpec& device : ci.devices) {
    if (!device_ids.insert(device.id).second) {
      out.push_back({Violation::Severity::kError, device.id,
                     "duplicate device id"});
    }
    if (!ci.type_registry.contains(device.device_type)) {
      out.push_back({Violation::Severity::kError, device.id,
                     "device type '" + device.device_type +
                         "' is not in the type registry"});
    }
    for (const ActionSpec& action : device.actions) {
      check_action(ci, action, /*on_link=*/false, nullptr, out);
    }
  }

  for (const NetworkLinkSpec& link : ci.links) {
    for (const std::string& endpoint :
         {link.endpoints.first, link.endpoints.second}) {
      if (!ci.find_device(endpoint)) {
        out.push_back({Violation::Severity::kError, link.id,
                       "endpoint '" + endpoint + "' is not a declared device"});
      }
    }
    for (const ActionSpec& action : link.actions) {
      check_action(ci, action, /*on_link=*/true, &link.logical_links, out);
    }
  }

  bool has_entry = false;
  for (std::size_t i = 0; i < ci.action_count(); ++i) {
    const ActionSpec& action = ci.action(i);
    if (action.category == ActionCategory::kAccess && action.entry_point) {
      has_entry = true;
      break;
    }
  }
  if (!has_entry) {
    out.push_back({Violation::Severity::kError, "<ci>",
                   "no entry point exists; no attack can begin"});
  }

  return report;
}

}  // namespace asmkit
