#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace asmkit {

inline constexpr const char* kToolVersion = "0.1.0";

// Provenance block embedded in every artifact a command writes. Timestamps
// are only recorded when stamping is requested; deterministic commands must
// produce byte-identical artifacts for identical manifests.
struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string command;
  std::string ci_fingerprint;
  std::string sm_id;
  nlohmann::json config;  // command-specific knobs, seeds included
  std::uint64_t seed = 0;
  std::optional<std::string> timestamp;
  std::string out_path;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& doc);

std::string iso8601_now();

}  // namespace asmkit
