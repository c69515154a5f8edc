#include "artgraph/graph/property_graph.hpp"

#include <algorithm>

#include "artgraph/util/error.hpp"

namespace artgraph {

namespace {
std::size_t idx(NodeLabel l) { return static_cast<std::size_t>(l); }
std::size_t idx(EdgeType t) { return static_cast<std::size_t>(t); }
}  // namespace

NodeId PropertyGraph::add_node(NodeLabel label, const std::string& name,
                               const PropertyMap& props) {
  return upsert_node(label, name, props).id;
}

UpsertResult PropertyGraph::upsert_node(NodeLabel label, const std::string& name,
                                        const PropertyMap& props) {
  if (name.empty()) fail(ErrorKind::kValidation, "node name must be non-empty");

  auto& names = name_index_[idx(label)];
  if (auto it = names.find(name); it != names.end()) {
    UpsertResult result{it->second, false, {}};
    auto& stored = slots_[it->second.value]->props;
    for (const auto& [key, value] : props) {
      auto [pos, inserted] = stored.emplace(key, value);
      if (!inserted && pos->second != value) result.conflicting_keys.push_back(key);
    }
    return result;
  }

  const NodeId id{slots_.size()};
  place_node(Node{id, label, name, props});
  return UpsertResult{id, true, {}};
}

void PropertyGraph::place_node(Node node) {
  const auto slot = node.id.value;
  if (slot < slots_.size() && slots_[slot]) {
    fail(ErrorKind::kValidation, "node slot already occupied: " + std::to_string(slot));
  }
  if (node.name.empty()) fail(ErrorKind::kValidation, "node name must be non-empty");
  auto& names = name_index_[idx(node.label)];
  if (names.contains(node.name)) {
    fail(ErrorKind::kValidation, "duplicate node name within label: " + node.name);
  }
  if (slot >= slots_.size()) {
    slots_.resize(slot + 1);
    out_adj_.resize(slot + 1);
    in_adj_.resize(slot + 1);
  }
  names.emplace(node.name, node.id);
  auto& by_label = label_index_[idx(node.label)];
  by_label.insert(std::lower_bound(by_label.begin(), by_label.end(), node.id), node.id);
  slots_[slot] = std::move(node);
  ++live_nodes_;
}

bool PropertyGraph::add_edge(NodeId src, EdgeType type, NodeId dst) {
  check_id(src);
  check_id(dst);
  const auto src_label = slots_[src.value]->label;
  const auto dst_label = slots_[dst.value]->label;
  if (!schema_allows(src_label, type, dst_label)) {
    fail(ErrorKind::kSchema, std::string("edge ") + std::string(to_string(src_label)) + " -" +
                                 std::string(to_string(type)) + "-> " +
                                 std::string(to_string(dst_label)) + " violates the schema");
  }
  if (has_edge(src, type, dst)) return false;
  out_adj_[src.value].push_back({type, dst});
  in_adj_[dst.value].push_back({type, src});
  ++edge_type_counts_[idx(type)];
  ++edge_count_;
  return true;
}

bool PropertyGraph::has_node(NodeId id) const {
  return id.value < slots_.size() && slots_[id.value].has_value();
}

void PropertyGraph::check_id(NodeId id) const {
  if (!has_node(id)) fail(ErrorKind::kNotFound, "unknown node id " + std::to_string(id.value));
}

const Node& PropertyGraph::node(NodeId id) const {
  check_id(id);
  return *slots_[id.value];
}

std::optional<NodeId> PropertyGraph::find(NodeLabel label, const std::string& name) const {
  const auto& names = name_index_[idx(label)];
  if (auto it = names.find(name); it != names.end()) return it->second;
  return std::nullopt;
}

bool PropertyGraph::has_edge(NodeId src, EdgeType type, NodeId dst) const {
  if (!has_node(src) || !has_node(dst)) return false;
  const auto& out = out_adj_[src.value];
  const auto& in = in_adj_[dst.value];
  // scan the shorter side
  if (out.size() <= in.size()) {
    return std::find(out.begin(), out.end(), AdjEntry{type, dst}) != out.end();
  }
  return std::find(in.begin(), in.end(), AdjEntry{type, src}) != in.end();
}

std::span<const AdjEntry> PropertyGraph::out_edges(NodeId id) const {
  check_id(id);
  return out_adj_[id.value];
}

std::span<const AdjEntry> PropertyGraph::in_edges(NodeId id) const {
  check_id(id);
  return in_adj_[id.value];
}

std::vector<AdjEntry> PropertyGraph::neighbors(NodeId id, Direction direction,
                                               const std::optional<EdgeTypeSet>& filter) const {
  check_id(id);
  std::vector<AdjEntry> out;
  auto take = [&](const std::vector<AdjEntry>& list) {
    for (const auto& e : list)
      if (!filter || filter->contains(e.type)) out.push_back(e);
  };
  if (direction != Direction::kIn) take(out_adj_[id.value]);
  if (direction != Direction::kOut) take(in_adj_[id.value]);
  return out;
}

const std::vector<NodeId>& PropertyGraph::nodes_with_label(NodeLabel label) const {
  return label_index_[idx(label)];
}

std::vector<NodeId> PropertyGraph::node_ids() const {
  std::vector<NodeId> ids;
  ids.reserve(live_nodes_);
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (slots_[i]) ids.push_back(NodeId{i});
  return ids;
}

std::vector<Edge> PropertyGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < slots_.size(); ++i)
    for (const auto& e : out_adj_[i]) out.push_back({NodeId{i}, e.type, e.node});
  return out;
}

GraphStats PropertyGraph::stats() const {
  GraphStats s;
  for (std::size_t l = 0; l < kNodeLabelCount; ++l) s.nodes_per_label[l] = label_index_[l].size();
  s.edges_per_type = edge_type_counts_;
  s.total_nodes = live_nodes_;
  s.total_edges = edge_count_;
  return s;
}

PropertyGraph PropertyGraph::subgraph_excluding(const std::unordered_set<NodeId>& exclude) const {
  PropertyGraph sub;
  sub.slots_.resize(slots_.size());
  sub.out_adj_.resize(slots_.size());
  sub.in_adj_.resize(slots_.size());
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i] && !exclude.contains(NodeId{i})) sub.place_node(*slots_[i]);
  }
  // Copy adjacency in source-major insertion order so out lists keep their
  // order; in lists are rebuilt in the same order as the parent's.
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (!sub.slots_[i]) continue;
    for (const auto& e : out_adj_[i]) {
      if (!sub.has_node(e.node)) continue;
      sub.out_adj_[i].push_back(e);
      ++sub.edge_type_counts_[idx(e.type)];
      ++sub.edge_count_;
    }
    for (const auto& e : in_adj_[i]) {
      if (sub.has_node(e.node)) sub.in_adj_[i].push_back(e);
    }
  }
  return sub;
}

}  // namespace artgraph
