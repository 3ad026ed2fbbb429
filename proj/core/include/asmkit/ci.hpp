#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace asmkit {

enum class ActionCategory { kAccess, kExploit, kImpact };

std::string to_string(ActionCategory category);
std::optional<ActionCategory> parse_category(std::string_view name);

// Ordered (source, sink) device pair. Logical links are stored directed;
// impact semantics of the direction are left to the simulation model.
using DevicePair = std::pair<std::string, std::string>;

struct ImpactHandlerSpec {
  std::string name;             // simulation-model handler
  nlohmann::json parameters;    // discrete parameter map
};

struct ActionSpec {
  std::string id;
  std::string action_type;
  ActionCategory category = ActionCategory::kAccess;
  double cost = 0.0;

  // access only
  bool entry_point = false;
  // exploit only
  std::vector<std::string> unlocked_impacts;
  std::vector<std::string> revealed_devices;
  // impact only
  std::optional<ImpactHandlerSpec> impact_handler;
  double schedule_time = 0.0;
  // link impact only
  std::optional<DevicePair> logical_link;
};

struct DeviceSpec {
  std::string id;
  std::string device_type;
  std::vector<ActionSpec> actions;
};

struct NetworkLinkSpec {
  std::string id;
  DevicePair endpoints;
  std::vector<DevicePair> logical_links;
  std::vector<ActionSpec> actions;
};

// Where an action lives. Exactly one of device_index / link_index is set.
struct ActionOwner {
  std::optional<std::size_t> device_index;
  std::optional<std::size_t> link_index;
  std::size_t slot = 0;  // position within the owner's action list
};

// The cybersecurity information layer. Immutable after finalize(); all
// engine and search code works against the indexes built there.
class Ci {
 public:
  std::vector<DeviceSpec> devices;
  std::vector<NetworkLinkSpec> links;
  std::set<std::string> type_registry;

  // Builds id -> index maps and the global action table. Throws
  // ReferenceError on duplicate ids. Must be called once after the
  // structural fields are filled; load_ci does this for you.
  void finalize();

  std::size_t action_count() const { return action_ids_.size(); }

  const std::vector<std::string>& action_ids() const { return action_ids_; }

  const ActionSpec& action(std::size_t index) const;
  const ActionOwner& owner(std::size_t index) const { return owners_[index]; }

  std::optional<std::size_t> device_index(std::string_view id) const;
  std::optional<std::size_t> link_index(std::string_view id) const;
  std::optional<std::size_t> action_index(std::string_view id) const;

  const ActionSpec* find_action(std::string_view id) const;
  const DeviceSpec* find_device(std::string_view id) const;
  const NetworkLinkSpec* find_link(std::string_view id) const;

  // Action indexes sorted by action id; the deterministic iteration order
  // used by accessible_actions and the search.
  const std::vector<std::size_t>& actions_by_id() const {
    return actions_by_id_;
  }

 private:
  std::map<std::string, std::size_t, std::less<>> device_by_id_;
  std::map<std::string, std::size_t, std::less<>> link_by_id_;
  std::map<std::string, std::size_t, std::less<>> action_by_id_;
  std::vector<std::string> action_ids_;
  std::vector<ActionOwner> owners_;
  std::vector<std::size_t> actions_by_id_;
};

struct Violation {
  enum class Severity { kError, kWarning };
  Severity severity = Severity::kError;
  std::string entity_id;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const;  // true iff no kError entries
  bool empty() const { return violations.empty(); }
};

// Checks every structural invariant of the layer: unique ids, category
// restrictions, reference integrity, logical-link containment for link
// impacts, entry-point existence. Violations are report entries, never
// exceptions.
ValidationReport validate_ci(const Ci& ci);

}  // namespace asmkit
