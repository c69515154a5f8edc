// artgraph: command line driver for ingestion, embedding, training,
// evaluation, queries and the HTTP service. Stages exchange files only.

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "artgraph/embed/node2vec.hpp"
#include "artgraph/experiment/comparison.hpp"
#include "artgraph/experiment/features.hpp"
#include "artgraph/experiment/pipeline.hpp"
#include "artgraph/experiment/synthetic.hpp"
#include "artgraph/graph/ingest.hpp"
#include "artgraph/graph/snapshot.hpp"
#include "artgraph/model/checkpoint.hpp"
#include "artgraph/query/json.hpp"
#include "artgraph/service/api.hpp"
#include "artgraph/util/error.hpp"

namespace {

using namespace artgraph;
using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// "--split-seed" -> "ARTGRAPH_SPLIT_SEED"
std::string env_name(const std::string& flag) {
  std::string out = "ARTGRAPH_";
  for (char c : flag.substr(2)) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& value, const std::string& help) {
  return app->add_option(name, value, help)->envname(env_name(name))->capture_default_str();
}

template <typename T>
CLI::Option* required(CLI::App* app, const std::string& name, T& value, const std::string& help) {
  return app->add_option(name, value, help)->envname(env_name(name))->required();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) fail(ErrorKind::kIo, "cannot write " + path);
}

template <typename T>
T read_config(const std::string& path) {
  if (path.empty()) return T{};
  const auto doc = json::parse(read_text(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) fail(ErrorKind::kFormat, path + " is not a JSON object");
  try {
    return doc.get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::kValidation, path + ": " + e.what());
  }
}

void print_json(const json& doc) { std::cout << doc.dump(2) << '\n'; }

// ---- ingest

struct IngestArgs {
  std::string nodes, edges, out, report;
};

void add_ingest(CLI::App& app, IngestArgs& a) {
  auto* sub = app.add_subcommand("ingest", "Load node/edge TSV files into a graph snapshot");
  required(sub, "--nodes", a.nodes, "Node file: label, name, JSON properties");
  required(sub, "--edges", a.edges, "Edge file: source label, source name, type, target label, target name");
  required(sub, "--out", a.out, "Snapshot to write");
  flag(sub, "--report", a.report, "Also write the ingest report as JSON here (default: not written)");
  sub->callback([&a] {
    PropertyGraph graph;
    const auto report = load_graph(graph, a.nodes, a.edges);
    save_snapshot(graph, a.out);
    const auto doc = query::to_json(report);
    if (!a.report.empty()) write_text(a.report, doc.dump(2) + "\n");
    print_json({{"snapshot", a.out}, {"stats", doc["stats"]}, {"rejected", doc["rejected"].size()}});
  });
}

// ---- synth

struct SynthArgs {
  std::string spec, out, features_out;
  std::optional<std::uint64_t> seed;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  auto* sub = app.add_subcommand("synth", "Generate a synthetic graph with planted labels and visual features");
  flag(sub, "--spec", a.spec, "Synthetic spec JSON (default: built-in spec; missing keys take built-in values)");
  flag(sub, "--seed", a.seed, "Overrides the spec's seed (default: the spec's)");
  required(sub, "--out", a.out, "Snapshot to write");
  required(sub, "--features-out", a.features_out, "Visual feature file to write");
  sub->callback([&a] {
    auto spec = read_config<experiment::SyntheticSpec>(a.spec);
    if (a.seed) spec.seed = *a.seed;
    const auto data = experiment::generate_synthetic(spec);
    save_snapshot(data.graph, a.out);
    experiment::save_features(data.features, a.features_out);
    print_json({{"snapshot", a.out},
                {"features", a.features_out},
                {"spec", spec},
                {"nodes", data.graph.node_count()},
                {"edges", data.graph.edge_count()}});
  });
}

// ---- embed

struct EmbedArgs {
  std::string snapshot, config, out;
  std::uint64_t split_seed = 1;
  std::optional<std::uint64_t> seed;
};

void add_embed(CLI::App& app, EmbedArgs& a) {
  auto* sub = app.add_subcommand("embed", "Train node2vec on the training subgraph of a split");
  required(sub, "--snapshot", a.snapshot, "Graph snapshot");
  flag(sub, "--split-seed", a.split_seed, "Seed of the train/validation/test split");
  flag(sub, "--config", a.config, "node2vec config JSON (default: built-in values; missing keys likewise)");
  flag(sub, "--seed", a.seed, "Overrides the node2vec seed (default: the config's)");
  required(sub, "--out", a.out, "Embedding file to write");
  sub->callback([&a] {
    const auto graph = load_snapshot(a.snapshot);
    auto config = read_config<embed::Node2VecConfig>(a.config);
    if (a.seed) config.seed = *a.seed;
    const auto split = experiment::split(graph, a.split_seed);
    if (split.train.empty()) fail(ErrorKind::kValidation, "the split leaves no training artworks");
    // Held-out artworks never reach the walker.
    const auto table = embed::node2vec(experiment::training_graph(graph, split), config);
    embed::save_embeddings(table, a.out);
    print_json({{"embeddings", a.out},
                {"rows", table.size()},
                {"dim", table.dim()},
                {"split_seed", a.split_seed},
                {"held_out", split.validation.size() + split.test.size()}});
  });
}

// ---- train

struct TrainArgs {
  std::string snapshot, features, embeddings, config, out, resume, mode = "multimodal";
  std::uint64_t split_seed = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
};

void add_train(CLI::App& app, TrainArgs& a) {
  auto* sub = app.add_subcommand("train", "Train the multi-task classifier and write a checkpoint");
  required(sub, "--snapshot", a.snapshot, "Graph snapshot");
  required(sub, "--features", a.features, "Visual feature file");
  required(sub, "--embeddings", a.embeddings, "Embeddings from `embed` with the same split seed");
  flag(sub, "--split-seed", a.split_seed, "Seed of the train/validation/test split");
  flag(sub, "--mode", a.mode, "multimodal, regularization_only or visual_only")
      ->check(CLI::IsMember({"multimodal", "regularization_only", "visual_only"}));
  flag(sub, "--config", a.config, "Model config JSON (default: built-in values); dimensions and class counts come from the data");
  flag(sub, "--seed", a.seed, "Overrides the model seed (default: the config's)");
  flag(sub, "--epochs", a.epochs, "Overrides the epoch count, the total when resuming (default: the config's)");
  flag(sub, "--resume", a.resume, "Continue from this checkpoint (default: start from a fresh initialisation)");
  required(sub, "--out", a.out, "Checkpoint to write");
  sub->callback([&a] {
    const auto graph = load_snapshot(a.snapshot);
    const auto features = experiment::load_features(a.features);
    const auto table = embed::load_embeddings(a.embeddings);
    const auto split = experiment::split(graph, a.split_seed);
    const auto vocab = experiment::LabelVocabulary::from_graph(graph);
    const auto data = experiment::assemble_dataset(graph, split, table, features, vocab);

    auto config = read_config<model::ModelConfig>(a.config);
    config.visual_dim = features.dim();
    config.context_dim = table.dim();
    config.num_classes = vocab.sizes();
    config.mode = model::parse_mode(a.mode);
    if (a.seed) config.seed = *a.seed;
    if (a.epochs) config.epochs = *a.epochs;

    model::Checkpoint ckpt;
    if (!a.resume.empty()) {
      ckpt = model::load_checkpoint(a.resume);
      model::check_resume_compatible(ckpt.state.config, config);
      if (ckpt.metadata.value("split_seed", a.split_seed) != a.split_seed) {
        fail(ErrorKind::kValidation, "the checkpoint was trained on a different split");
      }
      if (config.epochs < ckpt.state.epochs_done) {
        fail(ErrorKind::kValidation, "--epochs is below the " + std::to_string(ckpt.state.epochs_done) +
                                         " epochs already trained");
      }
      ckpt.state.config.epochs = config.epochs;
    } else {
      config.validate();
      ckpt.state = model::init_training(config);
    }
    ckpt.metadata["vocabulary"] = vocab;
    ckpt.metadata["split_seed"] = a.split_seed;
    model::train_epochs(ckpt.state, data.train, data.validation);
    model::save_checkpoint(ckpt, a.out);

    json log = json::array();
    for (const auto& e : ckpt.state.log) log.push_back(e);
    print_json({{"checkpoint", a.out},
                {"mode", a.mode},
                {"train", data.train.size()},
                {"validation", data.validation.size()},
                {"epochs_done", ckpt.state.epochs_done},
                {"log", log}});
  });
}

// ---- evaluate

struct EvaluateArgs {
  std::string checkpoint, snapshot, features, report;
  std::optional<std::uint64_t> split_seed;
};

std::string evaluation_report(const model::Checkpoint& ckpt, const std::string& ckpt_bytes, std::uint64_t split_seed,
                              std::size_t instances, const std::array<double, model::kNumTasks>& acc) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-16s %s\n", "mode", std::string(model::to_string(ckpt.state.config.mode)).c_str());
  out += line;
  std::snprintf(line, sizeof line, "%-16s %llu\n", "split seed", static_cast<unsigned long long>(split_seed));
  out += line;
  std::snprintf(line, sizeof line, "%-16s %zu\n", "epochs", ckpt.state.epochs_done);
  out += line;
  std::snprintf(line, sizeof line, "%-16s %zu\n", "test instances", instances);
  out += line;
  std::snprintf(line, sizeof line, "%-16s %s\n", "checkpoint", experiment::fnv1a_hex(ckpt_bytes).c_str());
  out += line;
  for (std::size_t t = 0; t < model::kNumTasks; ++t) {
    std::snprintf(line, sizeof line, "%-16s %.4f\n", (std::string(model::kTaskNames[t]) + " accuracy").c_str(), acc[t]);
    out += line;
  }
  return out;
}

void add_evaluate(CLI::App& app, EvaluateArgs& a) {
  auto* sub = app.add_subcommand("evaluate", "Per-task test accuracy of a checkpoint");
  required(sub, "--checkpoint", a.checkpoint, "Checkpoint from `train`");
  required(sub, "--snapshot", a.snapshot, "Graph snapshot the checkpoint was trained on");
  required(sub, "--features", a.features, "Visual feature file");
  flag(sub, "--split-seed", a.split_seed, "Split seed; defaults to the one recorded in the checkpoint");
  flag(sub, "--report", a.report, "Also write the report here (default: stdout only)");
  sub->callback([&a] {
    const auto bytes = read_text(a.checkpoint);
    const auto ckpt = model::decode_checkpoint(bytes);
    const auto graph = load_snapshot(a.snapshot);
    const auto features = experiment::load_features(a.features);

    const auto recorded = ckpt.metadata.contains("split_seed")
                              ? std::optional(ckpt.metadata["split_seed"].get<std::uint64_t>())
                              : std::nullopt;
    if (!a.split_seed && !recorded) fail(ErrorKind::kValidation, "the checkpoint records no split seed; pass --split-seed");
    const auto seed = a.split_seed.value_or(recorded.value_or(0));
    if (recorded && *recorded != seed) {
      fail(ErrorKind::kLeakage, "the checkpoint was trained with split seed " + std::to_string(*recorded));
    }
    const auto vocab = experiment::LabelVocabulary::from_graph(graph);
    if (ckpt.metadata.contains("vocabulary") && ckpt.metadata["vocabulary"].get<experiment::LabelVocabulary>() != vocab) {
      fail(ErrorKind::kValidation, "the snapshot's labels differ from the checkpoint's vocabulary");
    }
    const auto split = experiment::split(graph, seed);
    const auto test = experiment::labeled_instances(graph, split.test, features, vocab);
    const auto acc = experiment::evaluate(ckpt.state.params, ckpt.state.config, test);
    const auto report = evaluation_report(ckpt, bytes, seed, test.size(), acc);
    if (!a.report.empty()) write_text(a.report, report);
    std::cout << report;
  });
}

// ---- compare

struct CompareArgs {
  std::string spec, snapshot, features, config, report, report_json;
  std::optional<std::uint64_t> seed;
};

void add_compare(CLI::App& app, CompareArgs& a) {
  auto* sub = app.add_subcommand("compare", "Train and test all three modes on one split");
  auto* spec = flag(sub, "--spec", a.spec, "Synthetic spec JSON to generate the data from (default: built-in spec)");
  auto* snap = flag(sub, "--snapshot", a.snapshot, "Graph snapshot (with --features) instead of --spec (default: unused)");
  auto* feat = flag(sub, "--features", a.features, "Visual feature file for --snapshot (default: unused)");
  snap->needs(feat)->excludes(spec);
  feat->needs(snap);
  flag(sub, "--config", a.config, "Comparison config JSON: split_seed, node2vec, model (default: built-in values)");
  flag(sub, "--seed", a.seed, "Overrides the split, node2vec and model seeds (default: the config's)");
  flag(sub, "--report", a.report, "Also write the text report here (default: stdout only)");
  flag(sub, "--report-json", a.report_json, "Also write the report as JSON here (default: not written)");
  sub->callback([&a] {
    auto config = read_config<experiment::ComparisonConfig>(a.config);
    if (a.seed) config.split_seed = config.node2vec.seed = config.model.seed = *a.seed;
    experiment::ComparisonReport report;
    if (!a.snapshot.empty()) {
      const auto graph = load_snapshot(a.snapshot);
      const auto features = experiment::load_features(a.features);
      report = experiment::run_comparison(graph, features, config,
                                          {{"snapshot", experiment::fnv1a_hex(read_text(a.snapshot))},
                                           {"features", experiment::fnv1a_hex(read_text(a.features))}});
    } else {
      report = experiment::run_comparison(read_config<experiment::SyntheticSpec>(a.spec), config);
    }
    const auto text = experiment::format_report(report);
    if (!a.report.empty()) write_text(a.report, text);
    if (!a.report_json.empty()) write_text(a.report_json, json(report).dump(2) + "\n");
    std::cout << text;
  });
}

// ---- query

struct QueryArgs {
  std::string snapshot, from, to, place;
  int max_depth = 3;
};

void add_query(CLI::App& app, QueryArgs& a) {
  auto* sub = app.add_subcommand("query", "Run an analytic query and print JSON");
  required(sub, "--snapshot", a.snapshot, "Graph snapshot");
  sub->require_subcommand(1);

  auto* influence = sub->add_subcommand("influence", "Influence paths between two artists");
  required(influence, "--from", a.from, "Artist id or name");
  required(influence, "--to", a.to, "Artist id or name");
  flag(influence, "--max-depth", a.max_depth, "Longest path, in edges (1-6)");
  influence->callback([&a] {
    const auto graph = load_snapshot(a.snapshot);
    const auto from = query::resolve_node(graph, a.from, {NodeLabel::kArtist});
    const auto to = query::resolve_node(graph, a.to, {NodeLabel::kArtist});
    json paths = json::array();
    for (const auto& p : query::influence_paths(graph, from, to, a.max_depth)) paths.push_back(query::to_json(graph, p));
    print_json({{"from", query::node_summary(graph, from)},
                {"to", query::node_summary(graph, to)},
                {"max_depth", a.max_depth},
                {"count", paths.size()},
                {"paths", paths}});
  });

  auto* displaced = sub->add_subcommand("displaced", "Artworks kept outside the country they were completed in");
  displaced->callback([&a] {
    const auto graph = load_snapshot(a.snapshot);
    const auto report = query::artworks_displaced(graph);
    auto doc = query::to_json(graph, report);
    doc["count"] = report.rows.size();
    print_json(doc);
  });

  auto* at = sub->add_subcommand("at-location", "Artworks kept at a gallery, city or country");
  required(at, "--place", a.place, "Gallery, city or country id or name");
  at->callback([&a] {
    const auto graph = load_snapshot(a.snapshot);
    const auto place = query::resolve_node(graph, a.place, {NodeLabel::kGallery, NodeLabel::kCity, NodeLabel::kCountry});
    json list = json::array();
    for (auto id : query::artworks_at_location(graph, place)) list.push_back(query::node_summary(graph, id));
    print_json({{"place", query::node_summary(graph, place)}, {"count", list.size()}, {"artworks", list}});
  });
}

// ---- serve

struct ServeArgs {
  std::string snapshot, checkpoint, listen = "127.0.0.1:8080", static_dir, cors_origin;
};

void add_serve(CLI::App& app, ServeArgs& a) {
  auto* sub = app.add_subcommand("serve", "Serve the HTTP API (and optionally the web UI bundle)");
  required(sub, "--snapshot", a.snapshot, "Graph snapshot");
  flag(sub, "--checkpoint", a.checkpoint, "Checkpoint for /api/predict (default: none, so predict answers 503)");
  flag(sub, "--listen", a.listen, "host:port");
  flag(sub, "--static-dir", a.static_dir, "Web UI bundle served at / (default: API only)");
  flag(sub, "--cors-origin", a.cors_origin, "Allowed browser origin (default: none, no CORS headers)");
  sub->callback([&a] {
    const auto colon = a.listen.rfind(':');
    int port = -1;
    if (colon != std::string::npos) {
      try {
        port = std::stoi(a.listen.substr(colon + 1));
      } catch (const std::exception&) {
      }
    }
    if (port < 0 || port > 65535) fail(ErrorKind::kValidation, "--listen must be host:port, got " + a.listen);
    std::optional<model::Checkpoint> ckpt;
    if (!a.checkpoint.empty()) ckpt = model::load_checkpoint(a.checkpoint);
    const service::Api api(load_snapshot(a.snapshot), std::move(ckpt), {a.static_dir, a.cors_origin});
    std::cerr << "listening on " << a.listen << std::endl;
    service::serve(api, a.listen.substr(0, colon), port);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ArtGraph knowledge graph engine. Every flag can also be set through an ARTGRAPH_* "
               "environment variable (e.g. --split-seed via ARTGRAPH_SPLIT_SEED).",
               "artgraph"};
  app.require_subcommand(1);
  app.get_formatter()->column_width(34);

  IngestArgs ingest;
  SynthArgs synth;
  EmbedArgs embed;
  TrainArgs train;
  EvaluateArgs evaluate;
  CompareArgs compare;
  QueryArgs query;
  ServeArgs serve;
  add_ingest(app, ingest);
  add_synth(app, synth);
  add_embed(app, embed);
  add_train(app, train);
  add_evaluate(app, evaluate);
  add_compare(app, compare);
  add_query(app, query);
  add_serve(app, serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  } catch (const Error& e) {
    std::cerr << json{{"code", e.code()}, {"message", e.what()}}.dump() << '\n';
    return e.kind() == ErrorKind::kInternal ? kExitInternal : kExitData;
  } catch (const std::exception& e) {
    std::cerr << json{{"code", "internal"}, {"message", e.what()}}.dump() << '\n';
    return kExitInternal;
  }
  return 0;
}
