#pragma once

#include <json.hpp>

#include "artgraph/graph/ingest.hpp"
#include "artgraph/query/query_engine.hpp"

// JSON documents with stable field names, shared by the HTTP service and the
// command line tool.
namespace artgraph::query {

nlohmann::json to_json(const PropertyValue& value);
nlohmann::json to_json(const PropertyMap& props);
nlohmann::json to_json(const GraphStats& stats);
nlohmann::json to_json(const IngestReport& report);

// {"id", "label", "name"} plus a few display properties when present.
nlohmann::json node_summary(const PropertyGraph& graph, NodeId id);

// A numeric reference is a node id (kNotFound if vacant); anything else is a
// name looked up under `labels` in order.
NodeId resolve_node(const PropertyGraph& graph, const std::string& ref, std::initializer_list<NodeLabel> labels);

nlohmann::json to_json(const PropertyGraph& graph, const PathResult& path);
nlohmann::json to_json(const PropertyGraph& graph, const DisplacedReport& report);
nlohmann::json to_json(const PropertyGraph& graph, const ProfileDocument& doc);

}  // namespace artgraph::query
