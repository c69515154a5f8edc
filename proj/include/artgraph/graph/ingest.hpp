#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "artgraph/graph/property_graph.hpp"

namespace artgraph {

struct RejectedRow {
  std::string file;
  std::size_t line = 0;  // 1-based, header is line 1
  std::string reason;
};

struct NodeKeyNote {
  NodeLabel label;
  std::string name;
  std::string key;
};

struct IngestReport {
  GraphStats stats;  // graph state after the load
  std::size_t node_rows = 0;
  std::size_t edge_rows = 0;
  std::size_t duplicate_node_merges = 0;
  std::size_t duplicate_edges = 0;
  std::vector<RejectedRow> rejected;
  std::vector<NodeKeyNote> conflicts;     // differing values for an existing key
  std::vector<NodeKeyNote> unknown_keys;  // kept, but outside the label's vocabulary
};

// Loads the tab-separated node and edge files into `graph` (upserting).
// Malformed rows are skipped and recorded; an unreadable file or a wrong
// header throws.
//
// nodes:  label<TAB>name<TAB>props   (props: JSON object of scalars, may be empty)
// edges:  src_label<TAB>src_name<TAB>type<TAB>dst_label<TAB>dst_name
IngestReport load_graph(PropertyGraph& graph, const std::string& nodes_path,
                        const std::string& edges_path);

}  // namespace artgraph
