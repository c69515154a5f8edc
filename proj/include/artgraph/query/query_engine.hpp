#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "artgraph/graph/property_graph.hpp"

namespace artgraph::query {

inline constexpr int kMaxInfluenceDepth = 6;

struct PathResult {
  std::vector<NodeId> nodes;
  std::vector<EdgeType> edge_types;  // nodes.size() - 1 entries

  std::size_t length() const { return edge_types.size(); }
  friend bool operator==(const PathResult&, const PathResult&) = default;
};

// Which artist-to-artist relations count as influence, and in which
// direction they are followed. The default walks `influenced` edges from
// influencer to influenced; `reverse` walks them backwards.
struct InfluenceOptions {
  EdgeTypeSet edge_types{EdgeType::kInfluenced};
  bool reverse = false;
};

// All simple paths from `from` to `to` with 1..max_depth edges, shortest
// first, ties broken by the node id sequence and then the edge types.
std::vector<PathResult> influence_paths(const PropertyGraph& graph, NodeId from, NodeId to,
                                        int max_depth, const InfluenceOptions& options = {});

// degree k -> artists at shortest influence distance exactly k (ascending ids),
// for every k in 1..degrees.
std::map<int, std::vector<NodeId>> influence_reachable(const PropertyGraph& graph, NodeId artist,
                                                       int degrees,
                                                       const InfluenceOptions& options = {});

struct DisplacedArtwork {
  NodeId artwork;
  NodeId completed_country;
  NodeId stored_country;
  friend bool operator==(const DisplacedArtwork&, const DisplacedArtwork&) = default;
};

struct DisplacedReport {
  std::vector<DisplacedArtwork> rows;  // ascending artwork id
  std::size_t skipped = 0;             // artworks missing either location chain
};

// Completion country: completedIn -> Country, or completedIn -> City -> inCountry.
// Storage country: locatedInGallery -> Gallery -> inCity -> City -> inCountry.
std::optional<NodeId> completion_country(const PropertyGraph& graph, NodeId artwork);
std::optional<NodeId> storage_country(const PropertyGraph& graph, NodeId artwork);
DisplacedReport artworks_displaced(const PropertyGraph& graph);

// Artworks kept at a Gallery, or in any gallery of a City or Country.
// Ascending ids, no duplicates.
std::vector<NodeId> artworks_at_location(const PropertyGraph& graph, NodeId place);

struct NeighborGroup {
  EdgeType type;
  Direction direction;  // kOut or kIn
  std::vector<NodeId> nodes;
};

struct ProfileDocument {
  NodeId id;
  NodeLabel label;
  std::string name;
  PropertyMap props;
  std::vector<NeighborGroup> groups;  // ordered by (edge type, out before in)
};

ProfileDocument entity_profile(const PropertyGraph& graph, NodeId id);

// `n` distinct nodes of `label` (all of them if fewer exist), seeded.
std::vector<NodeId> random_entities(const PropertyGraph& graph, NodeLabel label, std::size_t n,
                                    std::uint64_t seed);

}  // namespace artgraph::query
