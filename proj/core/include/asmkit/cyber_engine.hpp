#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "asmkit/ci.hpp"

namespace asmkit {

enum class DeviceState : std::uint8_t {
  kNotVisible,
  kVisible,
  kAccessible,
  kCompromised
};
enum class LinkState : std::uint8_t { kNotAccessible, kAccessible };
enum class ActionState : std::uint8_t {
  kNotAccessible,
  kAccessible,
  kActive,
  kInvalid
};

std::string to_string(DeviceState s);
std::string to_string(LinkState s);
std::string to_string(ActionState s);

// Discrete cyber-state vector: one entry per declared device, link and
// action, indexed in CI declaration order. Values are immutable snapshots;
// step() returns a new value and never touches its input.
struct CyberState {
  std::vector<DeviceState> devices;
  std::vector<LinkState> links;
  std::vector<ActionState> actions;
  double spent_budget = 0.0;
  std::vector<std::size_t> action_log;  // executed actions, in order

  DeviceState device(std::size_t i) const { return devices[i]; }
  LinkState link(std::size_t i) const { return links[i]; }
  ActionState action(std::size_t i) const { return actions[i]; }
};

struct InitOverrides {
  std::map<std::string, DeviceState> devices;
  std::map<std::string, LinkState> links;
  std::map<std::string, ActionState> actions;
};

struct EngineConfig {
  // Semantics of the link-unlock rule triggered by device exploits. The
  // default unlocks a link when the exploit reveals a device among the
  // link's endpoints; the alternate resolves the exploit's unlocked impact
  // actions to their owning devices and intersects those with the
  // endpoints instead.
  enum class LinkUnlockVia { kRevealedDevices, kZetaActionTargets };
  LinkUnlockVia link_unlock_via = LinkUnlockVia::kRevealedDevices;
};

// One entity-state change applied by a step, for trace export and the
// conformance oracle.
struct StateDelta {
  enum class Kind { kDevice, kLink, kAction };
  Kind kind = Kind::kDevice;
  std::size_t index = 0;
  std::uint8_t from = 0;
  std::uint8_t to = 0;

  bool operator==(const StateDelta&) const = default;
  auto operator<=>(const StateDelta&) const = default;
};

struct StepRecord {
  std::size_t action_index = 0;
  double cost = 0.0;
  double cumulative_budget = 0.0;
  std::vector<StateDelta> deltas;  // sorted (kind, index)
};

// Initial conditions: devices not visible, links not accessible, actions
// accessible iff entry-point access. Overrides set states directly and do
// not fire any transition cascade.
CyberState init_states(const Ci& ci, const InitOverrides* overrides = nullptr);

// Executes one adversary action (which must currently be accessible) and
// returns the successor. Cascade order is fixed: device transitions, then
// link transitions, then action transitions keyed on the new device/link
// states. `record`, when given, receives the applied deltas.
CyberState step(const Ci& ci, const CyberState& state,
                std::size_t action_index, const EngineConfig& config = {},
                StepRecord* record = nullptr);

CyberState step(const Ci& ci, const CyberState& state,
                const std::string& action_id, const EngineConfig& config = {},
                StepRecord* record = nullptr);

// All actions currently accessible to the adversary, id-sorted.
std::vector<std::size_t> accessible_actions(const Ci& ci,
                                            const CyberState& state);

// Accessible actions whose cost fits the remaining budget.
std::vector<std::size_t> affordable_actions(const Ci& ci,
                                            const CyberState& state,
                                            double budget);

std::vector<std::string> accessible_action_ids(const Ci& ci,
                                               const CyberState& state);
std::vector<std::string> affordable_action_ids(const Ci& ci,
                                               const CyberState& state,
                                               double budget);

struct ReplayResult {
  std::vector<CyberState> states;   // one per executed action
  std::vector<StepRecord> records;  // parallel to states
};

// Replays an ordered action sequence from `initial`. Throws
// PreconditionError naming the first infeasible index.
ReplayResult replay(const Ci& ci, const CyberState& initial,
                    const std::vector<std::string>& actions,
                    const EngineConfig& config = {});

}  // namespace asmkit
