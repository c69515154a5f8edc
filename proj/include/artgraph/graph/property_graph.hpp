#pragma once

#include <array>
#include <bitset>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "artgraph/graph/schema.hpp"

namespace artgraph {

struct NodeId {
  std::uint64_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

}  // namespace artgraph

template <>
struct std::hash<artgraph::NodeId> {
  std::size_t operator()(const artgraph::NodeId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

namespace artgraph {

using PropertyValue = std::variant<std::string, std::int64_t, double>;
using PropertyMap = std::map<std::string, PropertyValue>;

struct Node {
  NodeId id;
  NodeLabel label;
  std::string name;
  PropertyMap props;
};

struct AdjEntry {
  EdgeType type;
  NodeId node;
  friend bool operator==(const AdjEntry&, const AdjEntry&) = default;
};

struct Edge {
  NodeId src;
  EdgeType type;
  NodeId dst;
  friend auto operator<=>(const Edge& a, const Edge& b) {
    if (auto c = a.src <=> b.src; c != 0) return c;
    if (auto c = a.type <=> b.type; c != 0) return c;
    return a.dst <=> b.dst;
  }
  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class Direction { kOut, kIn, kBoth };

class EdgeTypeSet {
 public:
  EdgeTypeSet() = default;
  EdgeTypeSet(std::initializer_list<EdgeType> types) {
    for (auto t : types) insert(t);
  }
  static EdgeTypeSet all() {
    EdgeTypeSet s;
    s.bits_.set();
    return s;
  }

  void insert(EdgeType t) { bits_.set(static_cast<std::size_t>(t)); }
  bool contains(EdgeType t) const { return bits_.test(static_cast<std::size_t>(t)); }
  bool empty() const { return bits_.none(); }

 private:
  std::bitset<kEdgeTypeCount> bits_;
};

struct GraphStats {
  std::array<std::uint64_t, kNodeLabelCount> nodes_per_label{};
  std::array<std::uint64_t, kEdgeTypeCount> edges_per_type{};
  std::uint64_t total_nodes = 0;
  std::uint64_t total_edges = 0;

  std::uint64_t nodes(NodeLabel l) const { return nodes_per_label[static_cast<std::size_t>(l)]; }
  std::uint64_t edges(EdgeType t) const { return edges_per_type[static_cast<std::size_t>(t)]; }
  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

// Outcome of an upsert: existing (label, name) pairs merge their properties;
// keys whose stored value differs from the incoming one are reported as
// conflicts and keep the stored value.
struct UpsertResult {
  NodeId id;
  bool created = false;
  std::vector<std::string> conflicting_keys;
};

// In-memory ArtGraph store. Node ids index slots; a slot can be vacant in
// graphs derived via subgraph_excluding, so ids stay comparable with the
// parent graph. Single writer; any number of concurrent readers once built.
class PropertyGraph {
 public:
  NodeId add_node(NodeLabel label, const std::string& name, const PropertyMap& props = {});
  UpsertResult upsert_node(NodeLabel label, const std::string& name, const PropertyMap& props);

  // Returns false when the triple already exists (no-op).
  bool add_edge(NodeId src, EdgeType type, NodeId dst);

  bool has_node(NodeId id) const;
  const Node& node(NodeId id) const;
  std::optional<NodeId> find(NodeLabel label, const std::string& name) const;
  bool has_edge(NodeId src, EdgeType type, NodeId dst) const;

  std::span<const AdjEntry> out_edges(NodeId id) const;
  std::span<const AdjEntry> in_edges(NodeId id) const;

  // Out-edges first (insertion order), then in-edges (insertion order).
  std::vector<AdjEntry> neighbors(NodeId id, Direction direction,
                                  const std::optional<EdgeTypeSet>& filter = std::nullopt) const;

  // Live ids of a label in ascending id order.
  const std::vector<NodeId>& nodes_with_label(NodeLabel label) const;
  std::vector<NodeId> node_ids() const;
  std::vector<Edge> edges() const;

  std::size_t node_count() const { return live_nodes_; }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t slot_count() const { return slots_.size(); }
  bool empty() const { return live_nodes_ == 0; }

  GraphStats stats() const;

  PropertyGraph subgraph_excluding(const std::unordered_set<NodeId>& exclude) const;

  // Restores a node at a fixed slot (used by snapshot loading and subgraph
  // construction). The slot must be vacant or beyond the current end.
  void place_node(Node node);

 private:
  void check_id(NodeId id) const;

  std::vector<std::optional<Node>> slots_;
  std::vector<std::vector<AdjEntry>> out_adj_;
  std::vector<std::vector<AdjEntry>> in_adj_;
  std::array<std::vector<NodeId>, kNodeLabelCount> label_index_;
  std::array<std::unordered_map<std::string, NodeId>, kNodeLabelCount> name_index_;
  std::array<std::uint64_t, kEdgeTypeCount> edge_type_counts_{};
  std::size_t live_nodes_ = 0;
  std::size_t edge_count_ = 0;
};

}  // namespace artgraph
