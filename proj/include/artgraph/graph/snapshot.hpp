#pragma once

#include <string>

#include "artgraph/graph/property_graph.hpp"

namespace artgraph {

// Binary snapshot: "AGPH", u16 version, then a nodes section and an edges
// section, each prefixed with its u64 byte length. Indexes are rebuilt on
// load. Vacant slots are preserved so node ids survive a round trip.
inline constexpr std::uint16_t kSnapshotVersion = 1;

std::string encode_snapshot(const PropertyGraph& graph);
PropertyGraph decode_snapshot(std::string_view bytes);

void save_snapshot(const PropertyGraph& graph, const std::string& path);
PropertyGraph load_snapshot(const std::string& path);

}  // namespace artgraph
