#include "artgraph/experiment/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "artgraph/util/binary_io.hpp"
#include "artgraph/util/error.hpp"
#include "artgraph/util/rng.hpp"

namespace artgraph::experiment {

std::unordered_set<NodeId> SplitAssignment::held_out() const {
  std::unordered_set<NodeId> out(validation.begin(), validation.end());
  out.insert(test.begin(), test.end());
  return out;
}

std::optional<Role> SplitAssignment::role(NodeId id) const {
  if (std::binary_search(train.begin(), train.end(), id)) return Role::kTrain;
  if (std::binary_search(validation.begin(), validation.end(), id)) return Role::kValidation;
  if (std::binary_search(test.begin(), test.end(), id)) return Role::kTest;
  return std::nullopt;
}

SplitAssignment split(const PropertyGraph& graph, std::uint64_t seed) {
  auto artworks = graph.nodes_with_label(NodeLabel::kArtwork);
  if (artworks.empty()) fail(ErrorKind::kValidation, "cannot split a graph with no artworks");
  Rng(mix_seed(seed, 0x5b117ULL)).shuffle(artworks);
  const std::size_t held = artworks.size() / 10;
  SplitAssignment s;
  s.seed = seed;
  s.validation.assign(artworks.begin(), artworks.begin() + static_cast<std::ptrdiff_t>(held));
  s.test.assign(artworks.begin() + static_cast<std::ptrdiff_t>(held),
                artworks.begin() + static_cast<std::ptrdiff_t>(2 * held));
  s.train.assign(artworks.begin() + static_cast<std::ptrdiff_t>(2 * held), artworks.end());
  for (auto* part : {&s.train, &s.validation, &s.test}) std::sort(part->begin(), part->end());
  return s;
}

PropertyGraph training_graph(const PropertyGraph& graph, const SplitAssignment& split) {
  return graph.subgraph_excluding(split.held_out());
}

// ---- vocabulary ----

namespace {
constexpr std::array<NodeLabel, model::kNumTasks> kTaskLabels{NodeLabel::kArtist, NodeLabel::kStyle, NodeLabel::kGenre};
constexpr std::array<EdgeType, model::kNumTasks> kTaskEdges{EdgeType::kCreatedBy, EdgeType::kHasStyle,
                                                            EdgeType::kHasGenre};
}  // namespace

LabelVocabulary LabelVocabulary::from_graph(const PropertyGraph& graph) {
  LabelVocabulary v;
  for (std::size_t t = 0; t < model::kNumTasks; ++t) {
    for (auto id : graph.nodes_with_label(kTaskLabels[t])) v.classes[t].push_back(graph.node(id).name);
    std::sort(v.classes[t].begin(), v.classes[t].end());
  }
  return v;
}

std::optional<std::uint32_t> LabelVocabulary::index_of(model::Task task, const std::string& name) const {
  const auto& names = classes[static_cast<std::size_t>(task)];
  auto it = std::lower_bound(names.begin(), names.end(), name);
  if (it == names.end() || *it != name) return std::nullopt;
  return static_cast<std::uint32_t>(it - names.begin());
}

std::array<std::size_t, model::kNumTasks> LabelVocabulary::sizes() const {
  return {classes[0].size(), classes[1].size(), classes[2].size()};
}

void to_json(nlohmann::json& j, const LabelVocabulary& v) {
  j = nlohmann::json::object();
  for (std::size_t t = 0; t < model::kNumTasks; ++t) j[std::string(model::kTaskNames[t])] = v.classes[t];
}

void from_json(const nlohmann::json& j, LabelVocabulary& v) {
  for (std::size_t t = 0; t < model::kNumTasks; ++t) {
    v.classes[t] = j.at(std::string(model::kTaskNames[t])).get<std::vector<std::string>>();
    if (!std::is_sorted(v.classes[t].begin(), v.classes[t].end()) ||
        std::adjacent_find(v.classes[t].begin(), v.classes[t].end()) != v.classes[t].end())
      fail(ErrorKind::kFormat, std::string(model::kTaskNames[t]) + " vocabulary must be sorted and unique");
  }
}

void save_vocabulary(const LabelVocabulary& v, const std::string& path) {
  io::write_file(path, nlohmann::json(v).dump(2) + "\n");
}

LabelVocabulary load_vocabulary(const std::string& path) {
  try {
    return nlohmann::json::parse(io::read_file(path)).get<LabelVocabulary>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormat, "bad vocabulary file " + path + ": " + e.what());
  }
}

// ---- datasets ----

std::optional<std::array<std::uint32_t, model::kNumTasks>> artwork_labels(const PropertyGraph& graph, NodeId artwork,
                                                                         const LabelVocabulary& vocab) {
  std::array<std::uint32_t, model::kNumTasks> labels{};
  for (std::size_t t = 0; t < model::kNumTasks; ++t) {
    std::optional<std::uint32_t> found;
    for (const auto& e : graph.out_edges(artwork)) {
      if (e.type != kTaskEdges[t]) continue;
      found = vocab.index_of(static_cast<model::Task>(t), graph.node(e.node).name);
      break;
    }
    if (!found) return std::nullopt;
    labels[t] = *found;
  }
  return labels;
}

std::vector<model::LabeledInstance> labeled_instances(const PropertyGraph& graph, std::span<const NodeId> artworks,
                                                      const FeatureTable& features, const LabelVocabulary& vocab,
                                                      std::size_t* unlabeled, std::size_t* no_features) {
  std::vector<model::LabeledInstance> out;
  for (auto id : artworks) {
    const auto labels = artwork_labels(graph, id, vocab);
    if (!labels) {
      if (unlabeled) ++*unlabeled;
      continue;
    }
    const auto* visual = features.find(graph.node(id).name);
    if (!visual) {
      if (no_features) ++*no_features;
      continue;
    }
    out.push_back({id, *visual, *labels, std::nullopt});
  }
  return out;
}

Dataset assemble_dataset(const PropertyGraph& graph, const SplitAssignment& split,
                         const embed::EmbeddingTable& embeddings, const FeatureTable& features,
                         const LabelVocabulary& vocab) {
  std::size_t leaked = 0;
  NodeId first_leak{};
  for (auto id : split.validation) {
    if (embeddings.contains(id) && leaked++ == 0) first_leak = id;
  }
  for (auto id : split.test) {
    if (embeddings.contains(id) && leaked++ == 0) first_leak = id;
  }
  if (leaked > 0)
    fail(ErrorKind::kLeakage, "embedding table contains " + std::to_string(leaked) +
                                  " validation/test artworks (e.g. id " + std::to_string(first_leak.value) +
                                  "); embeddings must be learned on the training graph only");

  Dataset d;
  d.train = labeled_instances(graph, split.train, features, vocab, &d.excluded_unlabeled, &d.excluded_no_features);
  d.validation = labeled_instances(graph, split.validation, features, vocab, &d.excluded_unlabeled,
                                   &d.excluded_no_features);
  d.test = labeled_instances(graph, split.test, features, vocab, &d.excluded_unlabeled, &d.excluded_no_features);
  for (auto& inst : d.train) {
    const auto row = embeddings.find(inst.artwork);
    if (!row)
      fail(ErrorKind::kValidation, "embedding table has no vector for training artwork '" +
                                       graph.node(inst.artwork).name + "'");
    inst.context.emplace(row->begin(), row->end());
  }
  return d;
}

std::array<double, model::kNumTasks> evaluate(const model::Params<float>& params, const model::ModelConfig& config,
                                              std::span<const model::LabeledInstance> test_set) {
  if (test_set.empty()) fail(ErrorKind::kValidation, "cannot evaluate on an empty test set");
  return model::accuracy(test_set, params, config);
}

// ---- dataset file ----

namespace {

void put_floats(std::string& out, std::span<const float> values) {
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, values[i]);
    out.append(buf, end);
  }
}

std::vector<float> parse_floats(std::string_view s, std::size_t expected, const std::string& where) {
  std::vector<float> out;
  out.reserve(expected);
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto token = s.substr(0, comma);
    float v;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
      fail(ErrorKind::kFormat, where + ": bad float '" + std::string(token) + "'");
    out.push_back(v);
    s = comma == std::string_view::npos ? std::string_view{} : s.substr(comma + 1);
  }
  if (out.size() != expected)
    fail(ErrorKind::kShape, where + ": " + std::to_string(out.size()) + " values, expected " + std::to_string(expected));
  return out;
}

}  // namespace

void save_dataset(const std::vector<model::LabeledInstance>& instances, const PropertyGraph& graph,
                  std::size_t visual_dim, std::size_t context_dim, const std::string& path) {
  std::string out = "# artgraph dataset v1 visual_dim=" + std::to_string(visual_dim) +
                    " context_dim=" + std::to_string(context_dim) + " count=" + std::to_string(instances.size()) +
                    "\nartwork\tartist\tstyle\tgenre\tvisual\tcontext\n";
  for (const auto& inst : instances) {
    out += graph.node(inst.artwork).name;
    for (auto l : inst.labels) out += '\t' + std::to_string(l);
    out += '\t';
    put_floats(out, inst.visual);
    out += '\t';
    if (inst.context) {
      put_floats(out, *inst.context);
    } else {
      out += '-';
    }
    out += '\n';
  }
  io::write_file(path, out);
}

std::vector<model::LabeledInstance> load_dataset(const PropertyGraph& graph, const std::string& path) {
  std::istringstream in(io::read_file(path));
  std::string line;
  std::size_t visual_dim = 0, context_dim = 0, count = 0;
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "# artgraph dataset v1 visual_dim=%zu context_dim=%zu count=%zu", &visual_dim,
                  &context_dim, &count) != 3)
    fail(ErrorKind::kFormat, path + ": missing dataset manifest line");
  if (!std::getline(in, line) || line != "artwork\tartist\tstyle\tgenre\tvisual\tcontext")
    fail(ErrorKind::kFormat, path + ": unexpected dataset header");
  std::vector<model::LabeledInstance> out;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = path + ":" + std::to_string(line_no);
    std::vector<std::string_view> cols;
    std::string_view rest = line;
    for (std::size_t pos; (pos = rest.find('\t')) != std::string_view::npos; rest = rest.substr(pos + 1))
      cols.push_back(rest.substr(0, pos));
    cols.push_back(rest);
    if (cols.size() != 6) fail(ErrorKind::kFormat, where + ": expected 6 columns");
    model::LabeledInstance inst;
    const auto id = graph.find(NodeLabel::kArtwork, std::string(cols[0]));
    if (!id) fail(ErrorKind::kNotFound, where + ": unknown artwork '" + std::string(cols[0]) + "'");
    inst.artwork = *id;
    for (std::size_t t = 0; t < model::kNumTasks; ++t) {
      auto [ptr, ec] = std::from_chars(cols[1 + t].data(), cols[1 + t].data() + cols[1 + t].size(), inst.labels[t]);
      if (ec != std::errc{} || ptr != cols[1 + t].data() + cols[1 + t].size())
        fail(ErrorKind::kFormat, where + ": bad label '" + std::string(cols[1 + t]) + "'");
    }
    inst.visual = parse_floats(cols[4], visual_dim, where);
    if (cols[5] != "-") inst.context = parse_floats(cols[5], context_dim, where);
    out.push_back(std::move(inst));
  }
  if (out.size() != count)
    fail(ErrorKind::kFormat, path + ": manifest promises " + std::to_string(count) + " rows, found " +
                                 std::to_string(out.size()));
  return out;
}

}  // namespace artgraph::experiment
