#include "artgraph/graph/snapshot.hpp"

#include "artgraph/util/binary_io.hpp"
#include "artgraph/util/error.hpp"

namespace artgraph {
namespace {

constexpr std::string_view kMagic = "AGPH";

enum class PropTag : std::uint8_t { kString = 0, kInt = 1, kFloat = 2 };

}  // namespace

std::string encode_snapshot(const PropertyGraph& graph) {
  io::Writer out;
  out.put_bytes(kMagic);
  out.put<std::uint16_t>(kSnapshotVersion);

  io::Writer nodes;
  nodes.put<std::uint64_t>(graph.slot_count());
  nodes.put<std::uint64_t>(graph.node_count());
  for (auto id : graph.node_ids()) {
    const auto& n = graph.node(id);
    nodes.put<std::uint64_t>(id.value);
    nodes.put<std::uint8_t>(static_cast<std::uint8_t>(n.label));
    nodes.put_string(n.name);
    nodes.put<std::uint32_t>(static_cast<std::uint32_t>(n.props.size()));
    for (const auto& [key, value] : n.props) {
      nodes.put_string(key);
      if (const auto* s = std::get_if<std::string>(&value)) {
        nodes.put<std::uint8_t>(static_cast<std::uint8_t>(PropTag::kString));
        nodes.put_string(*s);
      } else if (const auto* i = std::get_if<std::int64_t>(&value)) {
        nodes.put<std::uint8_t>(static_cast<std::uint8_t>(PropTag::kInt));
        nodes.put<std::int64_t>(*i);
      } else {
        nodes.put<std::uint8_t>(static_cast<std::uint8_t>(PropTag::kFloat));
        nodes.put<double>(std::get<double>(value));
      }
    }
  }
  out.put_section(nodes);

  // Edges are written source-major in out-list order, which reproduces the
  // out-adjacency order exactly. In-lists are rebuilt separately below.
  io::Writer edges;
  edges.put<std::uint64_t>(graph.edge_count());
  for (auto id : graph.node_ids()) {
    for (const auto& e : graph.out_edges(id)) {
      edges.put<std::uint64_t>(id.value);
      edges.put<std::uint8_t>(static_cast<std::uint8_t>(e.type));
      edges.put<std::uint64_t>(e.node.value);
    }
  }
  out.put_section(edges);
  return out.bytes();
}

PropertyGraph decode_snapshot(std::string_view bytes) {
  io::Reader in(bytes);
  if (in.remaining() < kMagic.size() || in.get_bytes(kMagic.size()) != kMagic) {
    fail(ErrorKind::kFormat, "not a graph snapshot (bad magic)");
  }
  const auto version = in.get<std::uint16_t>();
  if (version != kSnapshotVersion) {
    fail(ErrorKind::kFormat, "unsupported snapshot version " + std::to_string(version));
  }

  PropertyGraph graph;
  auto nodes = in.get_section();
  const auto slots = nodes.get<std::uint64_t>();
  const auto count = nodes.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < count; ++i) {
    Node n;
    n.id = NodeId{nodes.get<std::uint64_t>()};
    if (n.id.value >= slots) fail(ErrorKind::kFormat, "node id beyond slot count");
    const auto label = nodes.get<std::uint8_t>();
    if (label >= kNodeLabelCount) fail(ErrorKind::kFormat, "bad node label");
    n.label = static_cast<NodeLabel>(label);
    n.name = nodes.get_string();
    const auto nprops = nodes.get<std::uint32_t>();
    for (std::uint32_t p = 0; p < nprops; ++p) {
      auto key = nodes.get_string();
      switch (static_cast<PropTag>(nodes.get<std::uint8_t>())) {
        case PropTag::kString: n.props[key] = nodes.get_string(); break;
        case PropTag::kInt: n.props[key] = nodes.get<std::int64_t>(); break;
        case PropTag::kFloat: n.props[key] = nodes.get<double>(); break;
        default: fail(ErrorKind::kFormat, "bad property tag");
      }
    }
    graph.place_node(std::move(n));
  }
  if (!nodes.done()) fail(ErrorKind::kFormat, "trailing bytes in nodes section");

  auto edges = in.get_section();
  const auto edge_count = edges.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < edge_count; ++i) {
    const NodeId src{edges.get<std::uint64_t>()};
    const auto type = edges.get<std::uint8_t>();
    const NodeId dst{edges.get<std::uint64_t>()};
    if (type >= kEdgeTypeCount) fail(ErrorKind::kFormat, "bad edge type");
    if (!graph.has_node(src) || !graph.has_node(dst)) {
      fail(ErrorKind::kFormat, "edge references a missing node");
    }
    graph.add_edge(src, static_cast<EdgeType>(type), dst);
  }
  if (!edges.done()) fail(ErrorKind::kFormat, "trailing bytes in edges section");
  if (!in.done()) fail(ErrorKind::kFormat, "trailing bytes after snapshot");
  return graph;
}

void save_snapshot(const PropertyGraph& graph, const std::string& path) {
  io::write_file(path, encode_snapshot(graph));
}

PropertyGraph load_snapshot(const std::string& path) {
  return decode_snapshot(io::read_file(path));
}

}  // namespace artgraph
