#include "asmkit/manifest.hpp"

#include <chrono>
#include <ctime>

namespace asmkit {

nlohmann::json manifest_to_json(const RunManifest& manifest) {
  nlohmann::json doc;
  doc["tool_version"] = manifest.tool_version;
  doc["command"] = manifest.command;
  doc["ci_fingerprint"] = manifest.ci_fingerprint;
  doc["sm_id"] = manifest.sm_id;
  doc["config"] = manifest.config;
  doc["seed"] = manifest.seed;
  doc["timestamp"] =
      manifest.timestamp ? nlohmann::json(*manifest.timestamp)
                         : nlohmann::json(nullptr);
  doc["out_path"] = manifest.out_path;
  return doc;
}

RunManifest manifest_from_json(const nlohmann::json& doc) {
  RunManifest manifest;
  manifest.tool_version = doc.value("tool_version", std::string{});
  manifest.command = doc.value("command", std::string{});
  manifest.ci_fingerprint = doc.value("ci_fingerprint", std::string{});
  manifest.sm_id = doc.value("sm_id", std::string{});
  manifest.config = doc.value("config", nlohmann::json::object());
  manifest.seed = doc.value("seed", 0ull);
  if (doc.contains("timestamp") && doc["timestamp"].is_string()) {
    manifest.timestamp = doc["timestamp"].get<std::string>();
  }
  manifest.out_path = doc.value("out_path", std::string{});
  return manifest;
}

std::string iso8601_now() {
  const std::time_t now = std::time(nullptr);
  char buffer[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace asmkit
