#include "artgraph/query/query_engine.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

#include "artgraph/util/error.hpp"
#include "artgraph/util/rng.hpp"

namespace artgraph::query {
namespace {

void require_label(const PropertyGraph& graph, NodeId id, NodeLabel label) {
  const auto& n = graph.node(id);
  if (n.label != label) {
    fail(ErrorKind::kType, "node " + std::to_string(id.value) + " is a " +
                               std::string(to_string(n.label)) + ", expected " +
                               std::string(to_string(label)));
  }
}

void require_depth(int depth) {
  if (depth < 1 || depth > kMaxInfluenceDepth) {
    fail(ErrorKind::kValidation, "depth must be within 1.." + std::to_string(kMaxInfluenceDepth));
  }
}

// Influence steps out of `id`: forward follows out-edges, reverse in-edges.
template <typename Fn>
void for_each_step(const PropertyGraph& graph, NodeId id, const InfluenceOptions& options,
                   bool backwards, Fn&& fn) {
  const bool use_in = options.reverse != backwards;
  const auto edges = use_in ? graph.in_edges(id) : graph.out_edges(id);
  for (const auto& e : edges) {
    if (!options.edge_types.contains(e.type)) continue;
    if (graph.node(e.node).label != NodeLabel::kArtist) continue;
    fn(e);
  }
}

std::optional<NodeId> first_target(const PropertyGraph& graph, NodeId id, EdgeType type,
                                   NodeLabel label) {
  for (const auto& e : graph.out_edges(id))
    if (e.type == type && graph.node(e.node).label == label) return e.node;
  return std::nullopt;
}

}  // namespace

std::vector<PathResult> influence_paths(const PropertyGraph& graph, NodeId from, NodeId to,
                                        int max_depth, const InfluenceOptions& options) {
  require_label(graph, from, NodeLabel::kArtist);
  require_label(graph, to, NodeLabel::kArtist);
  require_depth(max_depth);
  if (from == to) return {};

  // Distance to `to` along reversed steps bounds the DFS.
  std::unordered_map<NodeId, int> dist_to_target{{to, 0}};
  std::deque<NodeId> frontier{to};
  while (!frontier.empty()) {
    const auto cur = frontier.front();
    frontier.pop_front();
    const int d = dist_to_target[cur];
    if (d == max_depth) continue;
    for_each_step(graph, cur, options, /*backwards=*/true, [&](const AdjEntry& e) {
      if (dist_to_target.emplace(e.node, d + 1).second) frontier.push_back(e.node);
    });
  }
  if (!dist_to_target.contains(from)) return {};

  std::vector<PathResult> results;
  PathResult current{{from}, {}};
  std::unordered_map<NodeId, bool> on_path{{from, true}};

  auto dfs = [&](auto&& self, NodeId node) -> void {
    const int remaining = max_depth - static_cast<int>(current.length());
    for_each_step(graph, node, options, /*backwards=*/false, [&](const AdjEntry& e) {
      auto it = dist_to_target.find(e.node);
      if (it == dist_to_target.end() || it->second + 1 > remaining) return;
      if (on_path[e.node]) return;
      current.nodes.push_back(e.node);
      current.edge_types.push_back(e.type);
      if (e.node == to) {
        results.push_back(current);
      } else {
        on_path[e.node] = true;
        self(self, e.node);
        on_path[e.node] = false;
      }
      current.nodes.pop_back();
      current.edge_types.pop_back();
    });
  };
  dfs(dfs, from);

  std::sort(results.begin(), results.end(), [](const PathResult& a, const PathResult& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    if (a.nodes != b.nodes) return a.nodes < b.nodes;
    return a.edge_types < b.edge_types;
  });
  return results;
}

std::map<int, std::vector<NodeId>> influence_reachable(const PropertyGraph& graph, NodeId artist,
                                                       int degrees,
                                                       const InfluenceOptions& options) {
  require_label(graph, artist, NodeLabel::kArtist);
  require_depth(degrees);

  std::map<int, std::vector<NodeId>> by_degree;
  for (int k = 1; k <= degrees; ++k) by_degree[k];

  std::unordered_map<NodeId, int> dist{{artist, 0}};
  std::vector<NodeId> layer{artist};
  for (int k = 1; k <= degrees && !layer.empty(); ++k) {
    std::vector<NodeId> next;
    for (auto id : layer) {
      for_each_step(graph, id, options, /*backwards=*/false, [&](const AdjEntry& e) {
        if (dist.emplace(e.node, k).second) next.push_back(e.node);
      });
    }
    std::sort(next.begin(), next.end());
    by_degree[k] = next;
    layer = std::move(next);
  }
  return by_degree;
}

std::optional<NodeId> completion_country(const PropertyGraph& graph, NodeId artwork) {
  for (const auto& e : graph.out_edges(artwork)) {
    if (e.type != EdgeType::kCompletedIn) continue;
    const auto label = graph.node(e.node).label;
    if (label == NodeLabel::kCountry) return e.node;
    if (label == NodeLabel::kCity) {
      if (auto c = first_target(graph, e.node, EdgeType::kInCountry, NodeLabel::kCountry)) return c;
    }
  }
  return std::nullopt;
}

std::optional<NodeId> storage_country(const PropertyGraph& graph, NodeId artwork) {
  for (const auto& e : graph.out_edges(artwork)) {
    if (e.type != EdgeType::kLocatedInGallery) continue;
    const auto city = first_target(graph, e.node, EdgeType::kInCity, NodeLabel::kCity);
    if (!city) continue;
    if (auto c = first_target(graph, *city, EdgeType::kInCountry, NodeLabel::kCountry)) return c;
  }
  return std::nullopt;
}

DisplacedReport artworks_displaced(const PropertyGraph& graph) {
  DisplacedReport report;
  for (auto artwork : graph.nodes_with_label(NodeLabel::kArtwork)) {
    const auto completed = completion_country(graph, artwork);
    const auto stored = storage_country(graph, artwork);
    if (!completed || !stored) {
      ++report.skipped;
      continue;
    }
    if (*completed != *stored) report.rows.push_back({artwork, *completed, *stored});
  }
  return report;
}

std::vector<NodeId> artworks_at_location(const PropertyGraph& graph, NodeId place) {
  const auto label = graph.node(place).label;
  auto sources = [&](NodeId id, EdgeType type, NodeLabel want, std::vector<NodeId>& out) {
    for (const auto& e : graph.in_edges(id))
      if (e.type == type && graph.node(e.node).label == want) out.push_back(e.node);
  };

  std::vector<NodeId> galleries;
  switch (label) {
    case NodeLabel::kGallery:
      galleries.push_back(place);
      break;
    case NodeLabel::kCity:
      sources(place, EdgeType::kInCity, NodeLabel::kGallery, galleries);
      break;
    case NodeLabel::kCountry: {
      std::vector<NodeId> cities;
      sources(place, EdgeType::kInCountry, NodeLabel::kCity, cities);
      for (auto city : cities) sources(city, EdgeType::kInCity, NodeLabel::kGallery, galleries);
      break;
    }
    default:
      fail(ErrorKind::kType, "place must be a Gallery, City or Country, got " +
                                 std::string(to_string(label)));
  }

  std::vector<NodeId> artworks;
  for (auto g : galleries) sources(g, EdgeType::kLocatedInGallery, NodeLabel::kArtwork, artworks);
  std::sort(artworks.begin(), artworks.end());
  artworks.erase(std::unique(artworks.begin(), artworks.end()), artworks.end());
  return artworks;
}

ProfileDocument entity_profile(const PropertyGraph& graph, NodeId id) {
  const auto& n = graph.node(id);
  ProfileDocument doc{id, n.label, n.name, n.props, {}};

  std::array<std::vector<NodeId>, kEdgeTypeCount> out_groups;
  std::array<std::vector<NodeId>, kEdgeTypeCount> in_groups;
  for (const auto& e : graph.out_edges(id)) out_groups[static_cast<std::size_t>(e.type)].push_back(e.node);
  for (const auto& e : graph.in_edges(id)) in_groups[static_cast<std::size_t>(e.type)].push_back(e.node);
  for (auto type : all_edge_types()) {
    const auto t = static_cast<std::size_t>(type);
    if (!out_groups[t].empty()) doc.groups.push_back({type, Direction::kOut, std::move(out_groups[t])});
    if (!in_groups[t].empty()) doc.groups.push_back({type, Direction::kIn, std::move(in_groups[t])});
  }
  return doc;
}

std::vector<NodeId> random_entities(const PropertyGraph& graph, NodeLabel label, std::size_t n,
                                    std::uint64_t seed) {
  std::vector<NodeId> pool = graph.nodes_with_label(label);
  n = std::min(n, pool.size());
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

}  // namespace artgraph::query
