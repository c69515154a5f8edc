#include "artgraph/embed/embedding_table.hpp"

#include <cmath>

#include "artgraph/util/binary_io.hpp"
#include "artgraph/util/error.hpp"

namespace artgraph::embed {

namespace {
constexpr std::string_view kMagic = "AGEM";
}

void EmbeddingTable::add(NodeId id, std::span<const float> vec) {
  if (vec.size() != dim_) {
    fail(ErrorKind::kShape, "embedding of length " + std::to_string(vec.size()) +
                                " does not match table dim " + std::to_string(dim_));
  }
  if (!index_.emplace(id, ids_.size()).second) {
    fail(ErrorKind::kValidation, "duplicate embedding id " + std::to_string(id.value));
  }
  ids_.push_back(id);
  data_.insert(data_.end(), vec.begin(), vec.end());
}

std::optional<std::span<const float>> EmbeddingTable::find(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

std::string encode_embeddings(const EmbeddingTable& table) {
  io::Writer out;
  out.put_bytes(kMagic);
  out.put<std::uint16_t>(kEmbeddingFileVersion);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(table.dim()));
  out.put<std::uint64_t>(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    out.put<std::uint64_t>(table.ids()[i].value);
    out.put_floats(table.row(i));
  }
  return out.bytes();
}

EmbeddingTable decode_embeddings(std::string_view bytes, std::optional<std::uint32_t> expected_dim) {
  io::Reader in(bytes);
  if (in.remaining() < kMagic.size() || in.get_bytes(kMagic.size()) != kMagic) {
    fail(ErrorKind::kFormat, "not an embedding file (bad magic)");
  }
  const auto version = in.get<std::uint16_t>();
  if (version != kEmbeddingFileVersion) {
    fail(ErrorKind::kFormat, "unsupported embedding file version " + std::to_string(version));
  }
  const auto dim = in.get<std::uint32_t>();
  const auto count = in.get<std::uint64_t>();
  if (expected_dim && dim != *expected_dim) {
    fail(ErrorKind::kShape, "embedding dim " + std::to_string(dim) + " does not match expected " +
                                std::to_string(*expected_dim));
  }
  const std::uint64_t row_bytes = 8 + 4ULL * dim;
  if (dim == 0 || in.remaining() != count * row_bytes) {
    fail(ErrorKind::kFormat, "embedding payload size does not match header (dim " +
                                 std::to_string(dim) + ", count " + std::to_string(count) + ")");
  }
  EmbeddingTable table(dim);
  std::vector<float> buf(dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    const NodeId id{in.get<std::uint64_t>()};
    in.get_floats(buf);
    table.add(id, buf);
  }
  return table;
}

void save_embeddings(const EmbeddingTable& table, const std::string& path) {
  io::write_file(path, encode_embeddings(table));
}

EmbeddingTable load_embeddings(const std::string& path, std::optional<std::uint32_t> expected_dim) {
  return decode_embeddings(io::read_file(path), expected_dim);
}

}  // namespace artgraph::embed
