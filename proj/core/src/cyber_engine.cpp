#include "asmkit/cyber_engine.hpp"

#include <algorithm>

#include "asmkit/errors.hpp"

namespace asmkit {

std::string to_string(DeviceState s) {
  switch (s) {
    case DeviceState::kNotVisible:
      return "not_visible";
    case DeviceState::kVisible:
      return "visible";
    case DeviceState::kAccessible:
      return "accessible";
    case DeviceState::kCompromised:
      return "compromised";
  }
  return "?";
}

std::string to_string(LinkState s) {
  return s == LinkState::kAccessible ? "accessible" : "not_accessible";
}

std::string to_string(ActionState s) {
  switch (s) {
    case ActionState::kNotAccessible:
      return "not_accessible";
    case ActionState::kAccessible:
      return "accessible";
    case ActionState::kActive:
      return "active";
    case ActionState::kInvalid:
      return "invalid";
  }
  return "?";
}

CyberState init_states(const Ci& ci, const InitOverrides* overrides) {
  CyberState state;
  state.devices.assign(ci.devices.size(), DeviceState::kNotVisible);
  state.links.assign(ci.links.size(), LinkState::kNotAccessible);
  state.actions.assign(ci.action_count(), ActionState::kNotAccessible);
  for (std::size_t i = 0; i < ci.action_count(); ++i) {
    const ActionSpec& action = ci.action(i);
    if (action.category == ActionCategory::kAccess && action.entry_point) {
      state.actions[i] = ActionState::kAccessible;
    }
  }
  if (overrides != nullptr) {
    // Overrides set values directly; they never fire transition cascades.
    for (const auto& [id, value] : overrides->devices) {
      auto index = ci.device_index(id);
      if (!index) throw ReferenceError("override names unknown device", id);
      state.devices[*index] = value;
    }
    for (const auto& [id, value] : overrides->links) {
      auto index = ci.link_index(id);
      if (!index) throw ReferenceError("override names unknown link", id);
      state.links[*index] = value;
    }
    for (const auto& [id, value] : overrides->actions) {
      auto index = ci.action_index(id);
      if (!index) throw ReferenceError("override names unknown action", id);
      state.actions[*index] = value;
    }
  }
  return state;
}

namespace {

struct DeltaLog {
  StepRecord* record;
  // Post-condition flags used by the action-transition rows.
  std::vector<bool> device_visible;
  std::vector<bool> device_accessible;
  std::vector<bool> link_accessible;

  void device(std::size_t i, DeviceState from, DeviceState to) {
    if (to == DeviceState::kVisible) device_visible[i] = true;
    if (to == DeviceState::kAccessible) device_accessible[i] = true;
    push(StateDelta::Kind::kDevice, i, static_cast<std::uint8_t>(from),
         static_cast<std::uint8_t>(to));
  }
  void link(std::size_t i, LinkState from, LinkState to) {
    if (to == LinkState::kAccessible) link_accessible[i] = true;
    push(StateDelta::Kind::kLink, i, static_cast<std::uint8_t>(from),
         static_cast<std::uint8_t>(to));
  }
  void action(std::size_t i, ActionState from, ActionState to) {
    push(StateDelta::Kind::kAction, i, static_cast<std::uint8_t>(from),
         static_cast<std::uint8_t>(to));
  }
  void push(StateDelta::Kind kind, std::size_t i, std::uint8_t from,
            std::uint8_t to) {
    if (record != nullptr) record->deltas.push_back({kind, i, from, to});
  }
};

// Devices owning the actions listed in `action_ids`.
std::vector<std::size_t> owning_devices(const Ci& ci,
                                        const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  for (const std::string& id : ids) {
    auto index = ci.action_index(id);
    if (!index) continue;
    const ActionOwner& owner = ci.owner(*index);
    if (owner.device_index) out.push_back(*owner.device_index);
  }
  return out;
}

bool endpoint_of(const Ci& ci, std::size_t device_index,
                 const NetworkLinkSpec& link) {
  const std::string& id = ci.devices[device_index].id;
  return link.endpoints.first == id || link.endpoints.second == id;
}

}  // namespace

CyberState step(const Ci& ci, const CyberState& state,
                std::size_t action_index, const EngineConfig& config,
                StepRecord* record) {
  if (action_index >= ci.action_count()) {
    throw ReferenceError("unknown action index",
                         std::to_string(action_index));
  }
  if (state.actions[action_index] != ActionState::kAccessible) {
    throw PreconditionError("action is not accessible (state: " +
                                to_string(state.actions[action_index]) + ")",
                            ci.action_ids()[action_index]);
  }

  const ActionSpec& exec = ci.action(action_index);
  const ActionOwner& exec_owner = ci.owner(action_index);

  CyberState next = state;
  DeltaLog log{record,
               std::vector<bool>(ci.devices.size(), false),
               std::vector<bool>(ci.devices.size(), false),
               std::vector<bool>(ci.links.size(), false)};
  if (record != nullptr) {
    record->action_index = action_index;
    record->cost = exec.cost;
  }

  // Entry promotion: an entry-point access reaches its device from outside
  // the modeled network, so the device becomes visible before the access
  // transition applies.
  if (exec.category == ActionCategory::kAccess && exec.entry_point &&
      exec_owner.device_index &&
      next.devices[*exec_owner.device_index] == DeviceState::kNotVisible) {
    next.devices[*exec_owner.device_index] = DeviceState::kVisible;
    log.device(*exec_owner.device_index, DeviceState::kNotVisible,
               DeviceState::kVisible);
  }

  // Device transitions.
  for (std::size_t i = 0; i < ci.devices.size(); ++i) {
    // Exploit elsewhere reveals this device.
    if (next.devices[i] == DeviceState::kNotVisible &&
        exec.category == ActionCategory::kExploit && exec_owner.device_index &&
        *exec_owner.device_index != i &&
        std::find(exec.revealed_devices.begin(), exec.revealed_devices.end(),
                  ci.devices[i].id) != exec.revealed_devices.end()) {
      next.devices[i] = DeviceState::kVisible;
      log.device(i, DeviceState::kNotVisible, DeviceState::kVisible);
    }
    // Link access reveals both endpoints.
    if (next.devices[i] == DeviceState::kNotVisible &&
        exec.category == ActionCategory::kAccess && exec_owner.link_index &&
        endpoint_of(ci, i, ci.links[*exec_owner.link_index])) {
      next.devices[i] = DeviceState::kVisible;
      log.device(i, DeviceState::kNotVisible, DeviceState::kVisible);
    }
    // Own access: visible -> accessible.
    if (next.devices[i] == DeviceState::kVisible &&
        exec.category == ActionCategory::kAccess && exec_owner.device_index &&
        *exec_owner.device_index == i) {
      next.devices[i] = DeviceState::kAccessible;
      log.device(i, DeviceState::kVisible, DeviceState::kAccessible);
    }
    // Own exploit: accessible -> compromised.
    if (next.devices[i] == DeviceState::kAccessible &&
        exec.category == ActionCategory::kExploit && exec_owner.device_index &&
        *exec_owner.device_index == i) {
      next.devices[i] = DeviceState::kCompromised;
      log.device(i, DeviceState::kAccessible, DeviceState::kCompromised);
    }
  }

  // Link transitions.
  for (std::size_t i = 0; i < ci.links.size(); ++i) {
    if (next.links[i] != LinkState::kNotAccessible) continue;
    const NetworkLinkSpec& link = ci.links[i];
    bool unlock = false;
    // Exploit on an endpoint device exposing the link.
    if (exec.category == ActionCategory::kExploit && exec_owner.device_index &&
        endpoint_of(ci, *exec_owner.device_index, link)) {
      if (config.link_unlock_via ==
          EngineConfig::LinkUnlockVia::kRevealedDevices) {
        for (const std::string& revealed : exec.revealed_devices) {
          if (revealed == link.endpoints.first ||
              revealed == link.endpoints.second) {
            unlock = true;
            break;
          }
        }
      } else {
        for (std::size_t device : owning_devices(ci, exec.unlocked_impacts)) {
          if (endpoint_of(ci, device, link)) {
            unlock = true;
            break;
          }
        }
      }
    }
    // Own access entry point.
    if (exec.category == ActionCategory::kAccess && exec_owner.link_index &&
        *exec_owner.link_index == i) {
      unlock = true;
    }
    if (unlock) {
      next.links[i] = LinkState::kAccessible;
      log.link(i, LinkState::kNotAccessible, LinkState::kAccessible);
    }
  }

  // Action transitions: unlock rows keyed on the new device/link states,
  // then the executed action goes active, then stale access actions are
  // invalidated.
  for (std::size_t j = 0; j < ci.action_count(); ++j) {
    if (next.actions[j] != ActionState::kNotAccessible) continue;
    const ActionSpec& candidate = ci.action(j);
    const ActionOwner& owner = ci.owner(j);
    bool unlock = false;
    if (owner.device_index) {
      if (log.device_visible[*owner.device_index] &&
          candidate.category == ActionCategory::kAccess) {
        unlock = true;
      }
      if (log.device_accessible[*owner.device_index] &&
          candidate.category == ActionCategory::kExploit) {
        unlock = true;
      }
    }
    if (owner.link_index && log.link_accessible[*owner.link_index]) {
      unlock = true;
    }
    if (exec.category == ActionCategory::kExploit && exec_owner.device_index &&
        std::find(exec.unlocked_impacts.begin(), exec.unlocked_impacts.end(),
                  candidate.id) != exec.unlocked_impacts.end()) {
      unlock = true;
    }
    if (unlock) {
      next.actions[j] = ActionState::kAccessible;
      log.action(j, ActionState::kNotAccessible, ActionState::kAccessible);
    }
  }

  next.actions[action_index] = ActionState::kActive;
  log.action(action_index, ActionState::kAccessible, ActionState::kActive);

  for (std::size_t j = 0; j < ci.action_count(); ++j) {
    if (next.actions[j] != ActionState::kAccessible) continue;
    const ActionOwner& owner = ci.owner(j);
    if (owner.device_index && log.device_accessible[*owner.device_index] &&
        ci.action(j).category == ActionCategory::kAccess) {
      next.actions[j] = ActionState::kInvalid;
      log.action(j, ActionState::kAccessible, ActionState::kInvalid);
    }
  }

  next.spent_budget = state.spent_budget + exec.cost;
  next.action_log.push_back(action_index);
  if (record != nullptr) {
    record->cumulative_budget = next.spent_budget;
    std::sort(record->deltas.begin(), record->deltas.end());
  }
  return next;
}

CyberState step(const Ci& ci, const CyberState& state,
                const std::string& action_id, const EngineConfig& config,
                StepRecord* record) {
  auto index = ci.action_index(action_id);
  if (!index) throw ReferenceError("unknown action id", action_id);
  return step(ci, state, *index, config, record);
}

std::vector<std::size_t> accessible_actions(const Ci& ci,
                                            const CyberState& state) {
  std::vector<std::size_t> out;
  for (std::size_t index : ci.actions_by_id()) {
    if (state.actions[index] == ActionState::kAccessible) {
      out.push_back(index);
    }
  }
  return out;
}

std::vector<std::size_t> affordable_actions(const Ci& ci,
                                            const CyberState& state,
                                            double budget) {
  const double remaining = budget - state.spent_budget;
  std::vector<std::size_t> out;
  for (std::size_t index : ci.actions_by_id()) {
    if (state.actions[index] == ActionState::kAccessible &&
        ci.action(index).cost <= remaining) {
      out.push_back(index);
    }
  }
  return out;
}

std::vector<std::string> accessible_action_ids(const Ci& ci,
                                               const CyberState& state) {
  std::vector<std::string> out;
  for (std::size_t index : accessible_actions(ci, state)) {
    out.push_back(ci.action_ids()[index]);
  }
  return out;
}

std::vector<std::string> affordable_action_ids(const Ci& ci,
                                               const CyberState& state,
                                               double budget) {
  std::vector<std::string> out;
  for (std::size_t index : affordable_actions(ci, state, budget)) {
    out.push_back(ci.action_ids()[index]);
  }
  return out;
}

ReplayResult replay(const Ci& ci, const CyberState& initial,
                    const std::vector<std::string>& actions,
                    const EngineConfig& config) {
  ReplayResult result;
  const CyberState* current = &initial;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    StepRecord record;
    try {
      result.states.push_back(step(ci, *current, actions[i], config, &record));
    } catch (const Error& err) {
      throw PreconditionError(std::string("replay failed at step ") +
                                  std::to_string(i) + ": " + err.what(),
                              actions[i]);
    }
    result.records.push_back(std::move(record));
    current = &result.states.back();
  }
  return result;
}

}  // namespace asmkit
