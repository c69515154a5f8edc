#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "artgraph/experiment/pipeline.hpp"
#include "artgraph/graph/property_graph.hpp"
#include "artgraph/model/checkpoint.hpp"
#include "artgraph/util/error.hpp"

namespace httplib {
class Server;
}

namespace artgraph::service {

struct ServiceConfig {
  std::string static_dir;   // webui bundle served at "/"; empty = API only
  std::string cors_origin;  // Access-Control-Allow-Origin value; empty = no CORS headers
  std::size_t default_home_n = 8;
  int default_max_depth = 3;
  std::size_t default_limit = 100;
  std::size_t default_top_k = 5;
};

// ApiError mapping: not found 404, unavailable 503, internal and I/O 500,
// every other library error is a bad request.
int http_status(ErrorKind kind);
nlohmann::json error_body(int status, std::string_view code, std::string_view message);

// Read-only HTTP API over a loaded snapshot and an optional checkpoint. The
// state is immutable after construction, so handlers run concurrently without
// locks.
class Api {
 public:
  Api(PropertyGraph graph, std::optional<model::Checkpoint> checkpoint, ServiceConfig config = {});

  // Registers the /api routes, CORS handling and the static bundle. The
  // handlers refer to this object, which must outlive the server.
  void mount(httplib::Server& server) const;

  const PropertyGraph& graph() const { return graph_; }
  bool has_model() const { return checkpoint_.has_value(); }

 private:
  PropertyGraph graph_;
  std::optional<model::Checkpoint> checkpoint_;
  std::optional<experiment::LabelVocabulary> vocabulary_;
  ServiceConfig config_;
};

// Blocks until the server stops. Throws kIo if the address cannot be bound.
void serve(const Api& api, const std::string& host, int port);

}  // namespace artgraph::service
