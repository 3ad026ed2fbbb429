#include "asmkit/netjson.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "asmkit/errors.hpp"
#include "asmkit/hash.hpp"

namespace asmkit {

namespace {

using nlohmann::json;

DevicePair pair_from_json(const json& value, const std::string& context) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_string() ||
      !value[1].is_string()) {
    throw ParseError("expected a [source, sink] id pair", context);
  }
  return {value[0].get<std::string>(), value[1].get<std::string>()};
}

ActionSpec action_from_json(const json& value, const std::string& context) {
  if (!value.is_object()) throw ParseError("action must be an object", context);
  ActionSpec action;
  if (!value.contains("id") || !value["id"].is_string()) {
    throw ParseError("action without an id", context);
  }
  action.id = value["id"].get<std::string>();
  const std::string action_context = context + ", action " + action.id;

  if (!value.contains("category") || !value["category"].is_string()) {
    throw ParseError("missing category", action_context);
  }
  auto category = parse_category(value["category"].get<std::string>());
  if (!category) {
    throw ParseError("unknown category '" +
                         value["category"].get<std::string>() + "'",
                     action_context);
  }
  action.category = *category;

  action.action_type = value.value("action_type", std::string{});
  if (value.contains("cost")) {
    if (!value["cost"].is_number()) {
      throw ParseError("cost must be a number", action_context);
    }
    action.cost = value["cost"].get<double>();
  }
  action.entry_point = value.value("entry_point", false);
  if (value.contains("unlocked_impacts")) {
    action.unlocked_impacts =
        value["unlocked_impacts"].get<std::vector<std::string>>();
  }
  if (value.contains("revealed_devices")) {
    action.revealed_devices =
        value["revealed_devices"].get<std::vector<std::string>>();
  }
  if (value.contains("impact_handler")) {
    const json& handler = value["impact_handler"];
    if (!handler.is_object() || !handler.contains("name")) {
      throw ParseError("impact_handler needs a name", action_context);
    }
    action.impact_handler = ImpactHandlerSpec{
        handler["name"].get<std::string>(),
        handler.value("parameters", json::object())};
  }
  if (value.contains("logical_link")) {
    action.logical_link = pair_from_json(value["logical_link"], action_context);
  }
  action.schedule_time = value.value("schedule_time", 0.0);
  return action;
}

json action_to_json(const ActionSpec& action) {
  json out;
  out["id"] = action.id;
  out["category"] = to_string(action.category);
  out["cost"] = action.cost;
  if (!action.action_type.empty()) out["action_type"] = action.action_type;
  switch (action.category) {
    case ActionCategory::kAccess:
      out["entry_point"] = action.entry_point;
      break;
    case ActionCategory::kExploit:
      out["unlocked_impacts"] = action.unlocked_impacts;
      out["revealed_devices"] = action.revealed_devices;
      break;
    case ActionCategory::kImpact:
      if (action.impact_handler) {
        out["impact_handler"] = {{"name", action.impact_handler->name},
                                 {"parameters", action.impact_handler->parameters}};
      }
      if (action.logical_link) {
        out["logical_link"] = {action.logical_link->first,
                               action.logical_link->second};
      }
      out["schedule_time"] = action.schedule_time;
      break;
  }
  return out;
}

}  // namespace

Ci load_ci_relaxed(const std::vector<CiDocument>& documents,
                   ValidationReport* report) {
  Ci ci;
  bool explicit_registry = false;
  std::set<std::string> observed_types;

  for (const CiDocument& document : documents) {
    const json& doc = document.doc;
    if (!doc.is_object()) {
      throw ParseError("document is not a JSON object", document.path);
    }
    if (!doc.contains(kSchemaKey) ||
        doc[kSchemaKey].get<std::string>() != kSchemaVersion) {
      throw ParseError(std::string("missing or unsupported ") + kSchemaKey +
                           " (expected \"" + kSchemaVersion + "\")",
                       document.path);
    }
    if (doc.contains("x_asm_device_types")) {
      explicit_registry = true;
      for (const json& type : doc["x_asm_device_types"]) {
        ci.type_registry.insert(type.get<std::string>());
      }
    }
    for (const json& node : doc.value("nodes", json::array())) {
      if (!node.contains("id")) {
        throw ParseError("node without an id", document.path);
      }
      DeviceSpec device;
      device.id = node["id"].get<std::string>();
      const json& properties = node.value("properties", json::object());
      device.device_type = properties.value("type", std::string{});
      observed_types.insert(device.device_type);
      for (const json& action : properties.value("actions", json::array())) {
        device.actions.push_back(action_from_json(
            action, document.path + ", device " + device.id));
      }
      ci.devices.push_back(std::move(device));
    }
    for (const json& link : doc.value("links", json::array())) {
      if (!link.contains("source") || !link.contains("target")) {
        throw ParseError("link without source/target", document.path);
      }
      NetworkLinkSpec spec;
      spec.endpoints = {link["source"].get<std::string>(),
                        link["target"].get<std::string>()};
      spec.id = link.value("id", spec.endpoints.first + "__" +
                                     spec.endpoints.second);
      const json& properties = link.value("properties", json::object());
      const std::string context = document.path + ", link " + spec.id;
      for (const json& pair : properties.value("logical_links", json::array())) {
        spec.logical_links.push_back(pair_from_json(pair, context));
      }
      for (const json& action : properties.value("actions", json::array())) {
        spec.actions.push_back(action_from_json(action, context));
      }
      ci.links.push_back(std::move(spec));
    }
  }

  if (!explicit_registry) ci.type_registry = std::move(observed_types);
  ci.finalize();
  if (report != nullptr) *report = validate_ci(ci);
  return ci;
}

Ci load_ci(const std::vector<CiDocument>& documents) {
  ValidationReport report;
  Ci ci = load_ci_relaxed(documents, &report);
  if (!report.ok()) {
    std::ostringstream message;
    message << "CI is not well-formed:";
    for (const Violation& violation : report.violations) {
      if (violation.severity != Violation::Severity::kError) continue;
      message << "\n  [" << violation.entity_id << "] " << violation.message;
    }
    throw ReferenceError(message.str(),
                         documents.empty() ? "" : documents.front().path);
  }
  return ci;
}

Ci load_ci_files(const std::vector<std::string>& paths) {
  std::vector<CiDocument> documents;
  documents.reserve(paths.size());
  for (const std::string& path : paths) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file", path);
    json doc;
    try {
      in >> doc;
    } catch (const json::parse_error& err) {
      throw ParseError(err.what(), path);
    }
    documents.push_back({path, std::move(doc)});
  }
  return load_ci(documents);
}

nlohmann::json ci_to_netjson(const Ci& ci) {
  json doc;
  doc["type"] = "NetworkGraph";
  doc[kSchemaKey] = kSchemaVersion;
  doc["x_asm_device_types"] =
      std::vector<std::string>(ci.type_registry.begin(), ci.type_registry.end());
  doc["nodes"] = json::array();
  for (const DeviceSpec& device : ci.devices) {
    json actions = json::array();
    for (const ActionSpec& action : device.actions) {
      actions.push_back(action_to_json(action));
    }
    doc["nodes"].push_back({{"id", device.id},
                            {"properties",
                             {{"type", device.device_type},
                              {"actions", std::move(actions)}}}});
  }
  doc["links"] = json::array();
  for (const NetworkLinkSpec& link : ci.links) {
    json logical = json::array();
    for (const DevicePair& pair : link.logical_links) {
      logical.push_back({pair.first, pair.second});
    }
    json actions = json::array();
    for (const ActionSpec& action : link.actions) {
      actions.push_back(action_to_json(action));
    }
    doc["links"].push_back({{"id", link.id},
                            {"source", link.endpoints.first},
                            {"target", link.endpoints.second},
                            {"properties",
                             {{"logical_links", std::move(logical)},
                              {"actions", std::move(actions)}}}});
  }
  return doc;
}

std::string ci_fingerprint(const Ci& ci) {
  return to_hex(fnv1a64(ci_to_netjson(ci).dump()));
}

namespace {

struct Adjacency {
  std::map<std::string, std::vector<std::string>> neighbors;  // sorted below
  std::map<std::pair<std::string, std::string>, std::string> edge_ids;
};

Adjacency build_adjacency(const LinkGraph& graph) {
  Adjacency adj;
  for (const std::string& node : graph.nodes) adj.neighbors[node];
  for (const LinkGraph::Edge& edge : graph.edges) {
    adj.neighbors[edge.source].push_back(edge.target);
    adj.neighbors[edge.target].push_back(edge.source);
    auto key = std::minmax(edge.source, edge.target);
    auto [it, inserted] =
        adj.edge_ids.emplace(std::pair{key.first, key.second}, edge.id);
    if (!inserted && edge.id < it->second) it->second = edge.id;
  }
  for (auto& [node, list] : adj.neighbors) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

// BFS distances toward `target`.
std::map<std::string, int> distances_to(const Adjacency& adj,
                                        const std::string& target) {
  std::map<std::string, int> dist;
  std::queue<std::string> frontier;
  dist[target] = 0;
  frontier.push(target);
  while (!frontier.empty()) {
    std::string node = std::move(frontier.front());
    frontier.pop();
    auto it = adj.neighbors.find(node);
    if (it == adj.neighbors.end()) continue;
    for (const std::string& next : it->second) {
      if (dist.contains(next)) continue;
      dist[next] = dist[node] + 1;
      frontier.push(next);
    }
  }
  return dist;
}

}  // namespace

std::map<std::string, std::vector<DevicePair>> derive_logical_links(
    const LinkGraph& graph, const std::vector<std::string>& sources,
    const std::vector<std::string>& sinks, const DeriveOptions& options) {
  for (const std::string& source : sources) {
    if (std::find(sinks.begin(), sinks.end(), source) != sinks.end()) {
      throw PreconditionError("node is both a source and a sink", source);
    }
  }
  Adjacency adj = build_adjacency(graph);
  std::map<std::string, std::vector<DevicePair>> result;
  for (const LinkGraph::Edge& edge : graph.edges) result[edge.id];

  for (const std::string& sink : sinks) {
    std::map<std::string, int> dist = distances_to(adj, sink);
    for (const std::string& source : sources) {
      auto source_dist = dist.find(source);
      if (source_dist == dist.end()) {
        throw ReferenceError("no path from source '" + source + "' to sink",
                             sink);
      }
      if (options.strict) {
        // Count shortest paths (saturating at 2) over the BFS DAG.
        std::map<std::string, int> count;
        std::vector<std::string> order;
        for (const auto& [node, d] : dist) order.push_back(node);
        std::sort(order.begin(), order.end(),
                  [&](const std::string& a, const std::string& b) {
                    return dist[a] < dist[b];
                  });
        count[sink] = 1;
        for (const std::string& node : order) {
          if (node == sink) continue;
          int total = 0;
          for (const std::string& next : adj.neighbors[node]) {
            auto it = dist.find(next);
            if (it == dist.end() || it->second != dist[node] - 1) continue;
            total += count[next];
            if (total > 1) break;
          }
          count[node] = std::min(total, 2);
        }
        if (count[source] > 1) {
          throw PreconditionError(
              "multiple shortest paths between '" + source + "' and '" + sink +
                  "' (strict mode)",
              source);
        }
      }
      // Lexicographically smallest shortest path: always step to the
      // smallest-id neighbor that still lies on a shortest path.
      std::string current = source;
      while (current != sink) {
        const int want = dist[current] - 1;
        const std::string* chosen = nullptr;
        for (const std::string& next : adj.neighbors[current]) {
          auto it = dist.find(next);
          if (it != dist.end() && it->second == want) {
            chosen = &next;
            break;  // neighbors are id-sorted
          }
        }
        if (!chosen) {
          throw ReferenceError("path reconstruction failed", current);
        }
        auto key = std::minmax(current, *chosen);
        result[adj.edge_ids.at({key.first, key.second})].push_back(
            {source, sink});
        current = *chosen;
      }
    }
  }
  return result;
}

void derive_logical_links_in_document(nlohmann::json& doc,
                                      const std::vector<std::string>& sources,
                                      const std::vector<std::string>& sinks,
                                      const DeriveOptions& options) {
  LinkGraph graph;
  for (const json& node : doc.value("nodes", json::array())) {
    graph.nodes.push_back(node["id"].get<std::string>());
  }
  for (const json& link : doc.value("links", json::array())) {
    std::string source = link["source"].get<std::string>();
    std::string target = link["target"].get<std::string>();
    graph.edges.push_back(
        {link.value("id", source + "__" + target), source, target});
  }
  auto mapping = derive_logical_links(graph, sources, sinks, options);
  for (json& link : doc["links"]) {
    std::string source = link["source"].get<std::string>();
    std::string target = link["target"].get<std::string>();
    std::string id = link.value("id", source + "__" + target);
    json pairs = json::array();
    for (const DevicePair& pair : mapping[id]) {
      pairs.push_back({pair.first, pair.second});
    }
    link["properties"]["logical_links"] = std::move(pairs);
  }
}

LinkGraph graph_from_ci(const Ci& ci) {
  LinkGraph graph;
  for (const DeviceSpec& device : ci.devices) graph.nodes.push_back(device.id);
  for (const NetworkLinkSpec& link : ci.links) {
    graph.edges.push_back(
        {link.id, link.endpoints.first, link.endpoints.second});
  }
  return graph;
}

}  // namespace asmkit
