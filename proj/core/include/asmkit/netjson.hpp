#pragma once

#include <map>
#include <string>
#include <vector>

#include "asmkit/ci.hpp"
#include "json.hpp"

namespace asmkit {

inline constexpr const char* kSchemaKey = "x_asm_schema";
inline constexpr const char* kSchemaVersion = "1.0";

struct CiDocument {
  std::string path;  // used in error messages only
  nlohmann::json doc;
};

// Parses a set of NetworkGraph-shaped documents into a cross-referenced CI.
// Devices are nodes, network links are links; adversary actions live under
// properties.actions. Unknown extension keys are ignored here and preserved
// by the document-level rewriters below. Throws ParseError / ReferenceError
// naming the offending document path and entity id.
Ci load_ci(const std::vector<CiDocument>& documents);

// Same parse, but structural violations come back through `report` instead
// of raising; the returned CI may be inconsistent when !report->ok().
Ci load_ci_relaxed(const std::vector<CiDocument>& documents,
                   ValidationReport* report);

// Convenience wrapper reading each path from disk.
Ci load_ci_files(const std::vector<std::string>& paths);

// Canonical single-document NetJSON rendering of a CI. Stable key order;
// the basis of ci_fingerprint.
nlohmann::json ci_to_netjson(const Ci& ci);

// Content hash of the canonical rendering, as a hex string.
std::string ci_fingerprint(const Ci& ci);

struct DeriveOptions {
  // With strict on, any (source, sink) pair with more than one shortest
  // path is an error. Default picks the lexicographically smallest path
  // (by node-id sequence) so derivation stays deterministic.
  bool strict = false;
};

// Plain undirected graph view used for logical-link derivation.
struct LinkGraph {
  std::vector<std::string> nodes;
  struct Edge {
    std::string id;
    std::string source;
    std::string target;
  };
  std::vector<Edge> edges;
};

// For each edge, the (source, sink) pairs whose selected shortest
// source -> sink path traverses it. Throws on an unreachable sink and, in
// strict mode, on shortest-path ambiguity.
std::map<std::string, std::vector<DevicePair>> derive_logical_links(
    const LinkGraph& graph, const std::vector<std::string>& sources,
    const std::vector<std::string>& sinks, const DeriveOptions& options = {});

// Document-level variant: reads the topology out of a NetJSON document,
// fills properties.logical_links on every link in place, and leaves every
// other key (including unknown extensions) untouched.
void derive_logical_links_in_document(nlohmann::json& doc,
                                      const std::vector<std::string>& sources,
                                      const std::vector<std::string>& sinks,
                                      const DeriveOptions& options = {});

LinkGraph graph_from_ci(const Ci& ci);

}  // namespace asmkit
