#include "artgraph/experiment/comparison.hpp"

#include <cstdio>

#include "artgraph/experiment/pipeline.hpp"
#include "artgraph/util/error.hpp"

namespace artgraph::experiment {

void to_json(nlohmann::json& j, const ComparisonConfig& c) {
  j = {{"split_seed", c.split_seed}, {"node2vec", c.node2vec}, {"model", c.model}};
}

void from_json(const nlohmann::json& j, ComparisonConfig& c) {
  ComparisonConfig d;
  c.split_seed = j.value("split_seed", d.split_seed);
  c.node2vec = j.value("node2vec", d.node2vec);
  c.model = j.value("model", d.model);
}

const ComparisonRow& ComparisonReport::row(model::Mode mode) const {
  for (const auto& r : rows)
    if (r.mode == mode) return r;
  fail(ErrorKind::kNotFound, "report has no row for mode " + std::string(model::to_string(mode)));
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fingerprint(const nlohmann::json& canonical) { return fnv1a_hex(canonical.dump()); }

ComparisonReport run_comparison(const PropertyGraph& graph, const FeatureTable& features,
                                const ComparisonConfig& config, nlohmann::json provenance) {
  const auto assignment = split(graph, config.split_seed);
  const auto embeddings = embed::node2vec(training_graph(graph, assignment), config.node2vec);
  const auto vocab = LabelVocabulary::from_graph(graph);
  const auto data = assemble_dataset(graph, assignment, embeddings, features, vocab);
  if (data.train.empty()) fail(ErrorKind::kValidation, "no labeled training artworks");
  if (data.test.empty()) fail(ErrorKind::kValidation, "no labeled test artworks");

  auto effective = config;
  effective.model.visual_dim = features.dim();
  effective.model.context_dim = embeddings.dim();
  effective.model.num_classes = vocab.sizes();

  ComparisonReport report;
  report.config = effective;
  if (!provenance.is_null()) report.config["data"] = std::move(provenance);
  report.fingerprint = fingerprint(report.config);
  report.train = data.train.size();
  report.validation = data.validation.size();
  report.test = data.test.size();
  report.excluded = data.excluded_unlabeled + data.excluded_no_features;

  for (auto mode : {model::Mode::kVisualOnly, model::Mode::kRegularizationOnly, model::Mode::kMultimodal}) {
    auto mc = effective.model;
    mc.mode = mode;
    const auto state = model::train(data.train, mc);
    ComparisonRow row;
    row.mode = mode;
    row.accuracy = evaluate(state.params, mc, data.test);
    row.final_loss = state.log.empty() ? 0.0 : state.log.back().loss;
    report.rows.push_back(row);
  }
  return report;
}

ComparisonReport run_comparison(const SyntheticSpec& spec, const ComparisonConfig& config) {
  const auto data = generate_synthetic(spec);
  return run_comparison(data.graph, data.features, config, nlohmann::json{{"synthetic", spec}});
}

std::string format_report(const ComparisonReport& r) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %8s %8s %8s\n", "mode", "artist", "style", "genre");
  out += line;
  for (const auto& row : r.rows) {
    std::snprintf(line, sizeof line, "%-20s %8.4f %8.4f %8.4f\n", std::string(model::to_string(row.mode)).c_str(),
                  row.accuracy[0], row.accuracy[1], row.accuracy[2]);
    out += line;
  }
  std::snprintf(line, sizeof line, "instances: train %zu, validation %zu, test %zu, excluded %zu\n", r.train,
                r.validation, r.test, r.excluded);
  out += line;
  out += "config fingerprint: " + r.fingerprint + "\n";
  return out;
}

void to_json(nlohmann::json& j, const ComparisonReport& r) {
  j = {{"config", r.config},
       {"fingerprint", r.fingerprint},
       {"instances", {{"train", r.train}, {"validation", r.validation}, {"test", r.test}, {"excluded", r.excluded}}},
       {"rows", nlohmann::json::array()}};
  for (const auto& row : r.rows) {
    nlohmann::json acc;
    for (std::size_t i = 0; i < model::kNumTasks; ++i) acc[std::string(model::kTaskNames[i])] = row.accuracy[i];
    j["rows"].push_back({{"mode", model::to_string(row.mode)}, {"accuracy", acc}, {"final_loss", row.final_loss}});
  }
}

}  // namespace artgraph::experiment
