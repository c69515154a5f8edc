#include "artgraph/service/api.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <httplib.h>

#include "artgraph/query/json.hpp"
#include "artgraph/query/query_engine.hpp"

namespace artgraph::service {

using nlohmann::json;

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotFound: return 404;
    case ErrorKind::kUnavailable: return 503;
    case ErrorKind::kInternal:
    case ErrorKind::kIo: return 500;
    default: return 400;
  }
}

json error_body(int status, std::string_view code, std::string_view message) {
  return {{"status", status}, {"code", code}, {"message", message}};
}

namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message) {
  res.status = status;
  res.set_content(error_body(status, code, message).dump(), kJson);
}

// Wraps a handler returning a JSON body; library errors become ApiError bodies.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      res.set_content(fn(req).dump(), kJson);
    } catch (const Error& e) {
      send_error(res, http_status(e.kind()), e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, error_code(ErrorKind::kInternal), e.what());
    }
  };
}

std::uint64_t parse_uint(const std::string& text, std::string_view what) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    fail(ErrorKind::kValidation, std::string(what) + " must be a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::optional<std::string> param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

std::string required(const httplib::Request& req, const char* key) {
  auto v = param(req, key);
  if (!v || v->empty()) fail(ErrorKind::kValidation, std::string("missing parameter '") + key + "'");
  return *v;
}

std::uint64_t uint_param(const httplib::Request& req, const char* key, std::uint64_t fallback) {
  const auto v = param(req, key);
  return v ? parse_uint(*v, key) : fallback;
}

NodeId existing(const PropertyGraph& graph, std::uint64_t id) {
  if (!graph.has_node(NodeId{id})) fail(ErrorKind::kNotFound, "no node with id " + std::to_string(id));
  return NodeId{id};
}

struct Page {
  std::size_t offset, limit;

  template <typename T>
  std::span<const T> apply(const std::vector<T>& items) const {
    const auto first = std::min(offset, items.size());
    return std::span<const T>(items).subspan(first, std::min(limit, items.size() - first));
  }
};

Page page_params(const httplib::Request& req, std::size_t default_limit) {
  return {uint_param(req, "offset", 0), uint_param(req, "limit", default_limit)};
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<float> parse_visual(const std::string& body, std::size_t dim) {
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) fail(ErrorKind::kValidation, "request body is not valid JSON");
  const json& values = doc.is_object() && doc.contains("visual") ? doc["visual"] : doc;
  if (!values.is_array()) fail(ErrorKind::kValidation, "expected a JSON array of numbers");
  if (values.size() != dim) {
    fail(ErrorKind::kShape, "expected " + std::to_string(dim) + " values, got " + std::to_string(values.size()));
  }
  std::vector<float> out;
  out.reserve(dim);
  for (const auto& v : values) {
    if (!v.is_number()) fail(ErrorKind::kValidation, "expected a JSON array of numbers");
    out.push_back(v.get<float>());
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Api::Api(PropertyGraph graph, std::optional<model::Checkpoint> checkpoint, ServiceConfig config)
    : graph_(std::move(graph)), checkpoint_(std::move(checkpoint)), config_(std::move(config)) {
  if (checkpoint_ && checkpoint_->metadata.contains("vocabulary")) {
    auto vocab = checkpoint_->metadata["vocabulary"].get<experiment::LabelVocabulary>();
    if (vocab.sizes() != checkpoint_->state.config.num_classes) {
      fail(ErrorKind::kValidation, "checkpoint vocabulary does not match its class counts");
    }
    vocabulary_ = std::move(vocab);
  }
}

void Api::mount(httplib::Server& server) const {
  const auto& g = graph_;
  const auto& cfg = config_;

  server.Get("/api/health", guarded([this](const httplib::Request&) {
               return json{{"status", "ok"},
                           {"nodes", graph_.node_count()},
                           {"edges", graph_.edge_count()},
                           {"model_loaded", has_model()}};
             }));

  // Without a seed the server picks one and echoes it, so a page can be reloaded.
  server.Get("/api/home", guarded([&g, &cfg](const httplib::Request& req) {
               const auto n = uint_param(req, "n", cfg.default_home_n);
               const auto seed = req.has_param("seed") ? uint_param(req, "seed", 0)
                                                       : std::uint64_t{std::random_device{}()};
               json out = {{"seed", seed}, {"n", n}};
               for (auto [key, label] : {std::pair{"artists", NodeLabel::kArtist},
                                         std::pair{"artworks", NodeLabel::kArtwork}}) {
                 json list = json::array();
                 for (auto id : query::random_entities(g, label, n, seed)) list.push_back(query::node_summary(g, id));
                 out[key] = std::move(list);
               }
               return out;
             }));

  server.Get(R"(/api/entity/([^/]+))", guarded([&g](const httplib::Request& req) {
               const auto id = existing(g, parse_uint(req.matches[1].str(), "entity id"));
               return query::to_json(g, query::entity_profile(g, id));
             }));

  server.Get("/api/queries/influence", guarded([&g, &cfg](const httplib::Request& req) {
               Stopwatch clock;
               const auto from = query::resolve_node(g, required(req, "from"), {NodeLabel::kArtist});
               const auto to = query::resolve_node(g, required(req, "to"), {NodeLabel::kArtist});
               const auto depth = uint_param(req, "max_depth", static_cast<std::uint64_t>(cfg.default_max_depth));
               if (depth > static_cast<std::uint64_t>(query::kMaxInfluenceDepth)) {
                 fail(ErrorKind::kValidation,
                      "max_depth must be within 1.." + std::to_string(query::kMaxInfluenceDepth));
               }
               const auto paths = query::influence_paths(g, from, to, static_cast<int>(depth));
               json list = json::array();
               for (const auto& p : page_params(req, cfg.default_limit).apply(paths))
                 list.push_back(query::to_json(g, p));
               return json{{"from", query::node_summary(g, from)},
                           {"to", query::node_summary(g, to)},
                           {"max_depth", depth},
                           {"count", paths.size()},
                           {"paths", std::move(list)},
                           {"elapsed_ms", clock.ms()}};
             }));

  server.Get("/api/queries/displaced", guarded([&g, &cfg](const httplib::Request& req) {
               Stopwatch clock;
               const auto report = query::artworks_displaced(g);
               const auto rows = page_params(req, cfg.default_limit).apply(report.rows);
               auto out = query::to_json(g, query::DisplacedReport{{rows.begin(), rows.end()}, report.skipped});
               out["count"] = report.rows.size();
               out["elapsed_ms"] = clock.ms();
               return out;
             }));

  server.Get("/api/queries/at_location", guarded([&g, &cfg](const httplib::Request& req) {
               Stopwatch clock;
               const auto place = query::resolve_node(g, required(req, "place"),
                                          {NodeLabel::kGallery, NodeLabel::kCity, NodeLabel::kCountry});
               const auto artworks = query::artworks_at_location(g, place);
               json list = json::array();
               for (auto id : page_params(req, cfg.default_limit).apply(artworks))
                 list.push_back(query::node_summary(g, id));
               return json{{"place", query::node_summary(g, place)},
                           {"count", artworks.size()},
                           {"artworks", std::move(list)},
                           {"elapsed_ms", clock.ms()}};
             }));

  server.Post("/api/predict", guarded([this](const httplib::Request& req) {
                if (!checkpoint_) fail(ErrorKind::kUnavailable, "no model checkpoint is loaded");
                const auto& state = checkpoint_->state;
                const auto k = uint_param(req, "k", config_.default_top_k);
                if (k == 0) fail(ErrorKind::kValidation, "k must be at least 1");
                const auto visual = parse_visual(req.body, state.config.visual_dim);
                const auto proba = model::predict_proba(visual, state.params, state.config);
                json tasks = json::object();
                for (std::size_t t = 0; t < model::kNumTasks; ++t) {
                  const auto& p = proba[t];
                  std::vector<std::uint32_t> order(p.size());
                  std::iota(order.begin(), order.end(), 0u);
                  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] > p[b]; });
                  order.resize(std::min<std::size_t>(k, order.size()));
                  json top = json::array();
                  for (auto c : order) {
                    json name = vocabulary_ ? json(vocabulary_->classes[t][c]) : json(nullptr);
                    top.push_back({{"class", c}, {"name", std::move(name)}, {"probability", p[c]}});
                  }
                  tasks[std::string(model::kTaskNames[t])] = std::move(top);
                }
                return json{{"mode", model::to_string(state.config.mode)}, {"k", k}, {"tasks", std::move(tasks)}};
              }));

  if (!cfg.static_dir.empty()) {
    if (!server.set_mount_point("/", cfg.static_dir)) {
      fail(ErrorKind::kIo, "static directory not found: " + cfg.static_dir);
    }
    // Client-side routes such as /entity/42 fall back to the bundle's index.
    const auto index = (std::filesystem::path(cfg.static_dir) / "index.html").string();
    server.Get(R"(/(?!api(/|$)).*)", [index](const httplib::Request&, httplib::Response& res) {
      if (!std::filesystem::exists(index)) {
        send_error(res, 404, error_code(ErrorKind::kNotFound), "no index.html in the static directory");
        return;
      }
      res.set_content(read_file(index), "text/html");
    });
  }

  if (!cfg.cors_origin.empty()) {
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    server.set_post_routing_handler([origin = cfg.cors_origin](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", origin);
    });
  }

  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    const bool missing = res.status == 404;
    send_error(res, res.status, error_code(missing ? ErrorKind::kNotFound : ErrorKind::kValidation),
               missing ? "no route for " + req.method + " " + req.path : "bad request");
    return httplib::Server::HandlerResponse::Handled;
  });
}

void serve(const Api& api, const std::string& host, int port) {
  httplib::Server server;
  api.mount(server);
  if (!server.bind_to_port(host, port)) {
    fail(ErrorKind::kIo, "cannot listen on " + host + ":" + std::to_string(port));
  }
  server.listen_after_bind();
}

}  // namespace artgraph::service
