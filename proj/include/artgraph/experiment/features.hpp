#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace artgraph::experiment {

// Precomputed visual vectors keyed by artwork name (names survive re-ingest,
// node ids need not).
class FeatureTable {
 public:
  FeatureTable() = default;
  explicit FeatureTable(std::size_t dim) : dim_(dim) {}

  void add(const std::string& artwork, std::span<const float> vec);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  const std::vector<float>* find(const std::string& artwork) const;
  const std::map<std::string, std::vector<float>>& rows() const { return rows_; }

  friend bool operator==(const FeatureTable&, const FeatureTable&) = default;

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<float>> rows_;
};

// "AGFV", u16 version, u32 dim, u64 count, then per row (sorted by name):
// u32-length name + dim f32 (LE).
inline constexpr std::uint16_t kFeatureFileVersion = 1;

std::string encode_features(const FeatureTable& table);
FeatureTable decode_features(std::string_view bytes);
void save_features(const FeatureTable& table, const std::string& path);
FeatureTable load_features(const std::string& path);

}  // namespace artgraph::experiment
