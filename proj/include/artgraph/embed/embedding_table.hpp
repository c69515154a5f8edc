#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "artgraph/graph/property_graph.hpp"

namespace artgraph::embed {

// One dense float vector per node id, stored row-major in insertion order.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  void add(NodeId id, std::span<const float> vec);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool contains(NodeId id) const { return index_.contains(id); }

  const std::vector<NodeId>& ids() const { return ids_; }
  std::span<const float> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<float> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::optional<std::span<const float>> find(NodeId id) const;

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.dim_ == b.dim_ && a.ids_ == b.ids_ && a.data_ == b.data_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<NodeId> ids_;
  std::vector<float> data_;
  std::unordered_map<NodeId, std::size_t> index_;
};

// "AGEM", u16 version, u32 dim, u64 count, then per row: u64 id + dim f32 (LE).
inline constexpr std::uint16_t kEmbeddingFileVersion = 1;

std::string encode_embeddings(const EmbeddingTable& table);
EmbeddingTable decode_embeddings(std::string_view bytes,
                                 std::optional<std::uint32_t> expected_dim = std::nullopt);

void save_embeddings(const EmbeddingTable& table, const std::string& path);
EmbeddingTable load_embeddings(const std::string& path,
                               std::optional<std::uint32_t> expected_dim = std::nullopt);

}  // namespace artgraph::embed
