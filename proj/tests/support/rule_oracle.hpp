#pragma once

#include "asmkit/cyber_engine.hpp"

namespace asmkit::testing {

// Independent interpreter of the published transition tables, structured as
// one pass per table row instead of the engine's per-entity loops. Used to
// cross-check every delta the engine reports.
struct OracleOutcome {
  CyberState next;
  std::vector<StateDelta> deltas;  // sorted (kind, index)
};

OracleOutcome oracle_step(const Ci& ci, const CyberState& state,
                          std::size_t action_index,
                          const EngineConfig& config = {});

}  // namespace asmkit::testing
