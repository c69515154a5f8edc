#include "artgraph/graph/schema.hpp"

#include <algorithm>

namespace artgraph {
namespace {

using L = NodeLabel;
using E = EdgeType;

constexpr SchemaRule kRules[] = {
    {L::kArtwork, E::kCreatedBy, L::kArtist},
    {L::kArtwork, E::kHasTag, L::kTag},
    {L::kArtwork, E::kHasGenre, L::kGenre},
    {L::kArtwork, E::kHasStyle, L::kStyle},
    {L::kArtwork, E::kInPeriod, L::kPeriod},
    {L::kArtwork, E::kPartOfSeries, L::kSeries},
    {L::kArtwork, E::kSoldAtAuction, L::kAuction},
    {L::kArtwork, E::kMadeOfMedia, L::kMedia},
    {L::kArtwork, E::kLocatedInGallery, L::kGallery},
    {L::kArtwork, E::kCompletedIn, L::kCity},
    {L::kArtwork, E::kCompletedIn, L::kCountry},
    {L::kArtist, E::kHasField, L::kField},
    {L::kArtist, E::kPartOfMovement, L::kMovement},
    {L::kArtist, E::kTrainedAt, L::kTraining},
    {L::kArtist, E::kHasCategory, L::kCategory},
    {L::kArtist, E::kInfluenced, L::kArtist},
    {L::kArtist, E::kTaughtBy, L::kArtist},
    {L::kArtist, E::kPatronOf, L::kArtist},
    {L::kCity, E::kInCountry, L::kCountry},
    {L::kGallery, E::kInCity, L::kCity},
};

constexpr std::string_view kLabelNames[kNodeLabelCount] = {
    "Artist", "Artwork", "Tag",     "Genre",  "Style", "Period",
    "Series", "Auction", "Media",   "Gallery", "City", "Country",
    "Field",  "Movement", "Training", "Category",
};

constexpr std::string_view kEdgeNames[kEdgeTypeCount] = {
    "createdBy",     "hasTag",       "hasGenre",       "hasStyle",
    "inPeriod",      "partOfSeries", "soldAtAuction",  "madeOfMedia",
    "locatedInGallery", "completedIn", "hasField",     "partOfMovement",
    "trainedAt",     "hasCategory",  "influenced",     "taughtBy",
    "patronOf",      "inCountry",    "inCity",
};

constexpr std::string_view kCommonKeys[] = {"description", "url", "image_url",
                                            "wikipedia_url"};
constexpr std::string_view kArtistKeys[] = {"biography", "birth_date", "death_date",
                                            "birth_place", "nationality", "gender"};
constexpr std::string_view kArtworkKeys[] = {"title", "completion_date", "width",
                                             "height", "size", "material"};
constexpr std::string_view kPlaceKeys[] = {"latitude", "longitude"};
constexpr std::string_view kPeriodKeys[] = {"start_year", "end_year"};

template <std::size_t N>
bool contains(const std::string_view (&keys)[N], std::string_view key) {
  return std::find(std::begin(keys), std::end(keys), key) != std::end(keys);
}

}  // namespace

std::span<const SchemaRule> schema_rules() { return kRules; }

bool schema_allows(NodeLabel source, EdgeType type, NodeLabel target) {
  return std::any_of(std::begin(kRules), std::end(kRules), [&](const SchemaRule& r) {
    return r.source == source && r.type == type && r.target == target;
  });
}

std::string_view to_string(NodeLabel label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

std::string_view to_string(EdgeType type) {
  return kEdgeNames[static_cast<std::size_t>(type)];
}

std::optional<NodeLabel> parse_node_label(std::string_view text) {
  for (std::size_t i = 0; i < kNodeLabelCount; ++i)
    if (kLabelNames[i] == text) return static_cast<NodeLabel>(i);
  return std::nullopt;
}

std::optional<EdgeType> parse_edge_type(std::string_view text) {
  for (std::size_t i = 0; i < kEdgeTypeCount; ++i)
    if (kEdgeNames[i] == text) return static_cast<EdgeType>(i);
  return std::nullopt;
}

bool is_known_property(NodeLabel label, std::string_view key) {
  if (contains(kCommonKeys, key)) return true;
  switch (label) {
    case L::kArtist: return contains(kArtistKeys, key);
    case L::kArtwork: return contains(kArtworkKeys, key);
    case L::kGallery:
    case L::kCity:
    case L::kCountry: return contains(kPlaceKeys, key);
    case L::kPeriod: return contains(kPeriodKeys, key);
    default: return false;
  }
}

}  // namespace artgraph
