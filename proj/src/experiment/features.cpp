#include "artgraph/experiment/features.hpp"

#include <cmath>

#include "artgraph/util/binary_io.hpp"
#include "artgraph/util/error.hpp"

namespace artgraph::experiment {

namespace {
constexpr std::string_view kMagic = "AGFV";
}

void FeatureTable::add(const std::string& artwork, std::span<const float> vec) {
  if (vec.size() != dim_)
    fail(ErrorKind::kShape, "feature vector for '" + artwork + "' has length " + std::to_string(vec.size()) +
                                ", table dim is " + std::to_string(dim_));
  for (float x : vec)
    if (!std::isfinite(x)) fail(ErrorKind::kValidation, "non-finite visual feature for '" + artwork + "'");
  if (!rows_.emplace(artwork, std::vector<float>(vec.begin(), vec.end())).second)
    fail(ErrorKind::kValidation, "duplicate feature row for '" + artwork + "'");
}

const std::vector<float>* FeatureTable::find(const std::string& artwork) const {
  auto it = rows_.find(artwork);
  return it == rows_.end() ? nullptr : &it->second;
}

std::string encode_features(const FeatureTable& table) {
  io::Writer out;
  out.put_bytes(kMagic);
  out.put<std::uint16_t>(kFeatureFileVersion);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(table.dim()));
  out.put<std::uint64_t>(table.size());
  for (const auto& [name, vec] : table.rows()) {
    out.put_string(name);
    out.put_floats(vec);
  }
  return out.bytes();
}

FeatureTable decode_features(std::string_view bytes) {
  io::Reader in(bytes);
  if (in.remaining() < kMagic.size() || in.get_bytes(kMagic.size()) != kMagic)
    fail(ErrorKind::kFormat, "not a feature file (bad magic)");
  const auto version = in.get<std::uint16_t>();
  if (version != kFeatureFileVersion)
    fail(ErrorKind::kFormat, "unsupported feature file version " + std::to_string(version));
  const auto dim = in.get<std::uint32_t>();
  const auto count = in.get<std::uint64_t>();
  FeatureTable table(dim);
  std::vector<float> buf(dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto name = in.get_string();
    in.get_floats(buf);
    table.add(name, buf);
  }
  if (!in.done()) fail(ErrorKind::kFormat, "trailing bytes after feature rows");
  return table;
}

void save_features(const FeatureTable& table, const std::string& path) {
  io::write_file(path, encode_features(table));
}

FeatureTable load_features(const std::string& path) { return decode_features(io::read_file(path)); }

}  // namespace artgraph::experiment
