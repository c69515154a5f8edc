#pragma once

#include <cstdint>
#include <list>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "artgraph/embed/alias_table.hpp"
#include "artgraph/embed/embedding_table.hpp"
#include "artgraph/graph/property_graph.hpp"

namespace artgraph::embed {

struct Node2VecConfig {
  std::size_t dim = 128;
  double p = 1.0;  // return parameter
  double q = 1.0;  // in-out parameter
  std::size_t walk_length = 40;
  std::size_t walks_per_node = 10;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of its value
  std::uint64_t seed = 1;
  bool directed = false;  // walk out-edges only
  std::size_t alias_cache_capacity = 1 << 16;

  void validate() const;
};

void to_json(nlohmann::json& j, const Node2VecConfig& c);
void from_json(const nlohmann::json& j, Node2VecConfig& c);

// Unlabelled adjacency used by the walker: sorted, de-duplicated neighbour
// lists (undirected by default, so parallel typed edges collapse).
class WalkGraph {
 public:
  WalkGraph(const PropertyGraph& graph, bool directed);

  std::span<const NodeId> neighbors(NodeId id) const;
  bool adjacent(NodeId from, NodeId to) const;
  const std::vector<NodeId>& nodes() const { return nodes_; }

 private:
  std::vector<NodeId> nodes_;
  std::vector<std::vector<NodeId>> adj_;  // indexed by NodeId slot
};

// Unnormalised second-order weights for the step after prev -> curr, one per
// neighbour of curr: 1/p back to prev, 1 to a neighbour of prev, 1/q otherwise.
std::vector<std::pair<NodeId, double>> transition_weights(const WalkGraph& graph, NodeId prev,
                                                          NodeId curr, double p, double q);
std::vector<std::pair<NodeId, double>> transition_weights(const PropertyGraph& graph, NodeId prev,
                                                          NodeId curr, double p, double q,
                                                          bool directed = false);

using Walk = std::vector<NodeId>;

// Rounds of walks_per_node; each round visits every node once in a shuffled
// order. Every walk draws from its own generator seeded by (seed, start, round).
std::vector<Walk> generate_walks(const PropertyGraph& graph, const Node2VecConfig& config);

// Skip-gram with negative sampling over the walks. Input vectors start
// uniform in [-0.5/dim, 0.5/dim], output vectors at zero; negatives come from
// the unigram^0.75 distribution. Rows are ordered by ascending node id.
EmbeddingTable train_skipgram(const std::vector<Walk>& walks, const Node2VecConfig& config);

EmbeddingTable node2vec(const PropertyGraph& graph, const Node2VecConfig& config);

// Bounded LRU map of second-order alias tables keyed by (prev, curr).
class TransitionCache {
 public:
  explicit TransitionCache(std::size_t capacity) : capacity_(capacity) {}

  const AliasTable& get(const WalkGraph& graph, NodeId prev, NodeId curr, double p, double q);
  std::size_t size() const { return map_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<NodeId, NodeId>& k) const noexcept;
  };
  using Entry = std::pair<std::pair<NodeId, NodeId>, AliasTable>;

  std::size_t capacity_;
  std::list<Entry> order_;  // front = most recent
  std::unordered_map<std::pair<NodeId, NodeId>, std::list<Entry>::iterator, KeyHash> map_;
};

}  // namespace artgraph::embed
