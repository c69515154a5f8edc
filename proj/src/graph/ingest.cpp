#include "artgraph/graph/ingest.hpp"

#include <fstream>
#include <string_view>

#include <json.hpp>

#include "artgraph/util/error.hpp"

namespace artgraph {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open file: " + path);
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Reads the header line. Returns false for a completely empty file.
bool expect_header(std::ifstream& in, const std::string& path, std::string_view expected) {
  std::string header;
  if (!std::getline(in, header)) return false;
  strip_cr(header);
  if (header.starts_with("\xEF\xBB\xBF")) header.erase(0, 3);
  if (header != expected) {
    fail(ErrorKind::kFormat, path + ": expected header '" + std::string(expected) + "'");
  }
  return true;
}

// Returns an error reason, or empty on success.
std::string parse_props(std::string_view text, PropertyMap& props) {
  if (text.empty()) return {};
  auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) return "props is not valid JSON";
  if (!doc.is_object()) return "props must be a JSON object";
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const auto& v = it.value();
    if (v.is_string()) {
      props[it.key()] = v.get<std::string>();
    } else if (v.is_number_integer()) {
      props[it.key()] = v.get<std::int64_t>();
    } else if (v.is_number_float()) {
      props[it.key()] = v.get<double>();
    } else {
      return "property '" + it.key() + "' is not a string or number";
    }
  }
  return {};
}

}  // namespace

IngestReport load_graph(PropertyGraph& graph, const std::string& nodes_path,
                        const std::string& edges_path) {
  IngestReport report;
  auto nodes_in = open_or_throw(nodes_path);
  auto edges_in = open_or_throw(edges_path);

  std::string line;
  std::size_t line_no = 1;
  if (expect_header(nodes_in, nodes_path, "label\tname\tprops")) {
    while (std::getline(nodes_in, line)) {
      ++line_no;
      strip_cr(line);
      if (line.empty()) continue;
      ++report.node_rows;
      auto reject = [&](std::string reason) {
        report.rejected.push_back({nodes_path, line_no, std::move(reason)});
      };
      const auto fields = split_tabs(line);
      if (fields.size() < 2 || fields.size() > 3) {
        reject("expected 3 tab-separated fields");
        continue;
      }
      const auto label = parse_node_label(fields[0]);
      if (!label) {
        reject("unknown label '" + std::string(fields[0]) + "'");
        continue;
      }
      if (fields[1].empty()) {
        reject("empty name");
        continue;
      }
      PropertyMap props;
      if (fields.size() == 3) {
        if (auto err = parse_props(fields[2], props); !err.empty()) {
          reject(err);
          continue;
        }
      }
      const std::string name(fields[1]);
      for (const auto& [key, _] : props)
        if (!is_known_property(*label, key)) report.unknown_keys.push_back({*label, name, key});

      auto result = graph.upsert_node(*label, name, props);
      if (!result.created) ++report.duplicate_node_merges;
      for (auto& key : result.conflicting_keys) report.conflicts.push_back({*label, name, key});
    }
  }

  line_no = 1;
  if (expect_header(edges_in, edges_path, "src_label\tsrc_name\ttype\tdst_label\tdst_name")) {
    while (std::getline(edges_in, line)) {
      ++line_no;
      strip_cr(line);
      if (line.empty()) continue;
      ++report.edge_rows;
      auto reject = [&](std::string reason) {
        report.rejected.push_back({edges_path, line_no, std::move(reason)});
      };
      const auto fields = split_tabs(line);
      if (fields.size() != 5) {
        reject("expected 5 tab-separated fields");
        continue;
      }
      const auto src_label = parse_node_label(fields[0]);
      const auto type = parse_edge_type(fields[2]);
      const auto dst_label = parse_node_label(fields[3]);
      if (!src_label || !dst_label) {
        reject("unknown node label");
        continue;
      }
      if (!type) {
        reject("unknown edge type '" + std::string(fields[2]) + "'");
        continue;
      }
      const auto src = graph.find(*src_label, std::string(fields[1]));
      const auto dst = graph.find(*dst_label, std::string(fields[4]));
      if (!src || !dst) {
        reject("unknown node '" + std::string(!src ? fields[1] : fields[4]) + "'");
        continue;
      }
      try {
        if (!graph.add_edge(*src, *type, *dst)) ++report.duplicate_edges;
      } catch (const Error& e) {
        reject(e.what());
      }
    }
  }

  report.stats = graph.stats();
  return report;
}

}  // namespace artgraph
