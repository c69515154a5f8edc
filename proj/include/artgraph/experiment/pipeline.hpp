#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "artgraph/embed/embedding_table.hpp"
#include "artgraph/experiment/features.hpp"
#include "artgraph/graph/property_graph.hpp"
#include "artgraph/model/classifier.hpp"

namespace artgraph::experiment {

enum class Role { kTrain, kValidation, kTest };

// Artwork-level partition; each list is sorted by id.
struct SplitAssignment {
  std::vector<NodeId> train, validation, test;
  std::uint64_t seed = 0;

  std::unordered_set<NodeId> held_out() const;  // validation and test
  std::optional<Role> role(NodeId id) const;
};

// Validation and test each take floor(N / 10) artworks, train the rest.
SplitAssignment split(const PropertyGraph& graph, std::uint64_t seed);

// The graph without validation/test artworks and their incident edges.
PropertyGraph training_graph(const PropertyGraph& graph, const SplitAssignment& split);

// Class names per task in ascending order; index = class id.
struct LabelVocabulary {
  std::array<std::vector<std::string>, model::kNumTasks> classes;

  static LabelVocabulary from_graph(const PropertyGraph& graph);
  std::optional<std::uint32_t> index_of(model::Task task, const std::string& name) const;
  std::array<std::size_t, model::kNumTasks> sizes() const;
  bool operator==(const LabelVocabulary&) const = default;
};

void to_json(nlohmann::json& j, const LabelVocabulary& v);
void from_json(const nlohmann::json& j, LabelVocabulary& v);
void save_vocabulary(const LabelVocabulary& v, const std::string& path);
LabelVocabulary load_vocabulary(const std::string& path);

// Artist/style/genre targets of an artwork via its first createdBy, hasStyle
// and hasGenre edges; nullopt when any is missing or not in the vocabulary.
std::optional<std::array<std::uint32_t, model::kNumTasks>> artwork_labels(const PropertyGraph& graph, NodeId artwork,
                                                                         const LabelVocabulary& vocab);

struct Dataset {
  std::vector<model::LabeledInstance> train, validation, test;
  std::size_t excluded_unlabeled = 0;  // missing one of the three labels
  std::size_t excluded_no_features = 0;
};

// Labeled instances for the given artworks, without context vectors.
std::vector<model::LabeledInstance> labeled_instances(const PropertyGraph& graph, std::span<const NodeId> artworks,
                                                      const FeatureTable& features, const LabelVocabulary& vocab,
                                                      std::size_t* unlabeled = nullptr,
                                                      std::size_t* no_features = nullptr);

// Training instances carry their artwork's embedding as context; validation
// and test instances never do. A table holding any validation/test id is a
// leakage error.
Dataset assemble_dataset(const PropertyGraph& graph, const SplitAssignment& split,
                         const embed::EmbeddingTable& embeddings, const FeatureTable& features,
                         const LabelVocabulary& vocab);

// Per-task accuracy on a non-empty set.
std::array<double, model::kNumTasks> evaluate(const model::Params<float>& params, const model::ModelConfig& config,
                                              std::span<const model::LabeledInstance> test_set);

// Text dataset file: a "#" manifest line, a column header, then one row per
// instance: artwork name, three label ids, visual floats, context floats or
// "-" (floats comma separated, shortest round-trip form).
void save_dataset(const std::vector<model::LabeledInstance>& instances, const PropertyGraph& graph,
                  std::size_t visual_dim, std::size_t context_dim, const std::string& path);
std::vector<model::LabeledInstance> load_dataset(const PropertyGraph& graph, const std::string& path);

}  // namespace artgraph::experiment
