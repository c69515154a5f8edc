#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "artgraph/embed/node2vec.hpp"
#include "artgraph/experiment/features.hpp"
#include "artgraph/experiment/synthetic.hpp"
#include "artgraph/graph/property_graph.hpp"
#include "artgraph/model/classifier.hpp"

namespace artgraph::experiment {

// visual_dim, context_dim and class counts in `model` are overwritten from
// the data; `model.mode` is ignored (all three modes run).
struct ComparisonConfig {
  std::uint64_t split_seed = 1;
  embed::Node2VecConfig node2vec;
  model::ModelConfig model;
};

void to_json(nlohmann::json& j, const ComparisonConfig& c);
void from_json(const nlohmann::json& j, ComparisonConfig& c);

struct ComparisonRow {
  model::Mode mode = model::Mode::kVisualOnly;
  std::array<double, model::kNumTasks> accuracy{};  // test set
  double final_loss = 0;
};

struct ComparisonReport {
  nlohmann::json config;  // effective configuration, canonical form
  std::string fingerprint;
  std::size_t train = 0, validation = 0, test = 0, excluded = 0;
  std::vector<ComparisonRow> rows;  // visual_only, regularization_only, multimodal

  const ComparisonRow& row(model::Mode mode) const;
};

// FNV-1a 64 as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
// fnv1a_hex of the compact JSON dump (object keys are sorted).
std::string fingerprint(const nlohmann::json& canonical);

// One split, one training-graph embedding, then the three modes trained from
// the same seed and evaluated on the same test set.
ComparisonReport run_comparison(const PropertyGraph& graph, const FeatureTable& features,
                                const ComparisonConfig& config, nlohmann::json provenance = nullptr);
ComparisonReport run_comparison(const SyntheticSpec& spec, const ComparisonConfig& config);

// Aligned plain-text table, rows = modes, columns = tasks.
std::string format_report(const ComparisonReport& report);
void to_json(nlohmann::json& j, const ComparisonReport& r);

}  // namespace artgraph::experiment
