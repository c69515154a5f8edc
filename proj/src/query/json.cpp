#include "artgraph/query/json.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "artgraph/util/error.hpp"

namespace artgraph::query {

using nlohmann::json;

json to_json(const PropertyValue& value) {
  return std::visit([](const auto& v) { return json(v); }, value);
}

json to_json(const PropertyMap& props) {
  json out = json::object();
  for (const auto& [key, value] : props) out[key] = to_json(value);
  return out;
}

json to_json(const GraphStats& stats) {
  json nodes = json::object();
  for (auto label : all_node_labels()) nodes[std::string(to_string(label))] = stats.nodes(label);
  json edges = json::object();
  for (auto type : all_edge_types()) edges[std::string(to_string(type))] = stats.edges(type);
  return {{"nodes", nodes},
          {"edges", edges},
          {"total_nodes", stats.total_nodes},
          {"total_edges", stats.total_edges}};
}

json to_json(const IngestReport& report) {
  json rejected = json::array();
  for (const auto& r : report.rejected)
    rejected.push_back({{"file", r.file}, {"line", r.line}, {"reason", r.reason}});
  auto notes = [](const std::vector<NodeKeyNote>& list) {
    json out = json::array();
    for (const auto& n : list)
      out.push_back({{"label", to_string(n.label)}, {"name", n.name}, {"key", n.key}});
    return out;
  };
  return {{"stats", to_json(report.stats)},
          {"node_rows", report.node_rows},
          {"edge_rows", report.edge_rows},
          {"duplicate_node_merges", report.duplicate_node_merges},
          {"duplicate_edges", report.duplicate_edges},
          {"rejected", rejected},
          {"conflicts", notes(report.conflicts)},
          {"unknown_keys", notes(report.unknown_keys)}};
}

json node_summary(const PropertyGraph& graph, NodeId id) {
  const auto& n = graph.node(id);
  json out = {{"id", id.value}, {"label", to_string(n.label)}, {"name", n.name}};
  for (const char* key : {"image_url", "completion_date", "birth_date", "death_date"}) {
    if (auto it = n.props.find(key); it != n.props.end()) out[key] = to_json(it->second);
  }
  return out;
}

NodeId resolve_node(const PropertyGraph& graph, const std::string& ref, std::initializer_list<NodeLabel> labels) {
  if (!ref.empty() && std::all_of(ref.begin(), ref.end(), [](unsigned char c) { return std::isdigit(c); })) {
    std::uint64_t id = 0;
    const auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), id);
    if (ec != std::errc() || !graph.has_node(NodeId{id})) fail(ErrorKind::kNotFound, "no node with id " + ref);
    return NodeId{id};
  }
  for (auto label : labels) {
    if (auto id = graph.find(label, ref)) return *id;
  }
  fail(ErrorKind::kNotFound, "no node named '" + ref + "'");
}

json to_json(const PropertyGraph& graph, const PathResult& path) {
  json nodes = json::array();
  for (auto id : path.nodes) nodes.push_back(node_summary(graph, id));
  json types = json::array();
  for (auto t : path.edge_types) types.push_back(to_string(t));
  return {{"length", path.length()}, {"nodes", nodes}, {"edge_types", types}};
}

json to_json(const PropertyGraph& graph, const DisplacedReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"artwork", node_summary(graph, r.artwork)},
                    {"completed_country", node_summary(graph, r.completed_country)},
                    {"stored_country", node_summary(graph, r.stored_country)}});
  }
  return {{"rows", rows}, {"skipped", report.skipped}};
}

json to_json(const PropertyGraph& graph, const ProfileDocument& doc) {
  json groups = json::array();
  for (const auto& g : doc.groups) {
    json nodes = json::array();
    for (auto id : g.nodes) nodes.push_back(node_summary(graph, id));
    groups.push_back({{"edge_type", to_string(g.type)},
                      {"direction", g.direction == Direction::kOut ? "out" : "in"},
                      {"count", g.nodes.size()},
                      {"nodes", nodes}});
  }
  return {{"id", doc.id.value},
          {"label", to_string(doc.label)},
          {"name", doc.name},
          {"props", to_json(doc.props)},
          {"groups", groups}};
}

}  // namespace artgraph::query
