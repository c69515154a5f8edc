#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace artgraph {

enum class NodeLabel : std::uint8_t {
  kArtist,
  kArtwork,
  kTag,
  kGenre,
  kStyle,
  kPeriod,
  kSeries,
  kAuction,
  kMedia,
  kGallery,
  kCity,
  kCountry,
  kField,
  kMovement,
  kTraining,
  kCategory,
};

inline constexpr std::size_t kNodeLabelCount = 16;

enum class EdgeType : std::uint8_t {
  // artwork-sourced
  kCreatedBy,
  kHasTag,
  kHasGenre,
  kHasStyle,
  kInPeriod,
  kPartOfSeries,
  kSoldAtAuction,
  kMadeOfMedia,
  kLocatedInGallery,
  kCompletedIn,
  // artist-sourced
  kHasField,
  kPartOfMovement,
  kTrainedAt,
  kHasCategory,
  kInfluenced,
  kTaughtBy,
  kPatronOf,
  // location
  kInCountry,
  kInCity,
};

inline constexpr std::size_t kEdgeTypeCount = 19;

// One allowed (source label, edge type, target label) combination.
struct SchemaRule {
  NodeLabel source;
  EdgeType type;
  NodeLabel target;
};

std::span<const SchemaRule> schema_rules();

bool schema_allows(NodeLabel source, EdgeType type, NodeLabel target);

std::string_view to_string(NodeLabel label);
std::string_view to_string(EdgeType type);
std::optional<NodeLabel> parse_node_label(std::string_view text);
std::optional<EdgeType> parse_edge_type(std::string_view text);

constexpr std::array<NodeLabel, kNodeLabelCount> all_node_labels() {
  std::array<NodeLabel, kNodeLabelCount> out{};
  for (std::size_t i = 0; i < kNodeLabelCount; ++i) out[i] = static_cast<NodeLabel>(i);
  return out;
}

constexpr std::array<EdgeType, kEdgeTypeCount> all_edge_types() {
  std::array<EdgeType, kEdgeTypeCount> out{};
  for (std::size_t i = 0; i < kEdgeTypeCount; ++i) out[i] = static_cast<EdgeType>(i);
  return out;
}

// Property keys documented for a label. Keys outside this set are kept but
// reported by ingestion.
bool is_known_property(NodeLabel label, std::string_view key);

}  // namespace artgraph
