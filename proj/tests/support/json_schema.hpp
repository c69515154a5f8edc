#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace artgraph::testing {

// Checks a document against the JSON Schema subset used by the API fixtures:
// type (string or list), required, properties, additionalProperties: false,
// items, enum, minimum and local "#/definitions/..." references. Returns one
// message per violation, empty when the document conforms.
class SchemaChecker {
 public:
  explicit SchemaChecker(nlohmann::json root) : root_(std::move(root)) {}

  std::vector<std::string> check(const nlohmann::json& doc) const {
    std::vector<std::string> errors;
    visit(root_, doc, "$", errors);
    return errors;
  }

 private:
  static bool has_type(const nlohmann::json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "integer") return doc.is_number_integer();
    if (type == "number") return doc.is_number();
    if (type == "boolean") return doc.is_boolean();
    if (type == "null") return doc.is_null();
    return false;
  }

  const nlohmann::json& deref(const nlohmann::json& schema) const {
    if (!schema.contains("$ref")) return schema;
    const auto ref = schema["$ref"].get<std::string>();
    const std::string prefix = "#/definitions/";
    if (ref.rfind(prefix, 0) != 0) throw std::runtime_error("unsupported $ref " + ref);
    return root_.at("definitions").at(ref.substr(prefix.size()));
  }

  void visit(const nlohmann::json& raw, const nlohmann::json& doc, const std::string& path,
             std::vector<std::string>& errors) const {
    const auto& schema = deref(raw);
    if (schema.contains("type")) {
      const auto& t = schema["type"];
      bool ok = false;
      if (t.is_array()) {
        for (const auto& x : t) ok = ok || has_type(doc, x.get<std::string>());
      } else {
        ok = has_type(doc, t.get<std::string>());
      }
      if (!ok) {
        errors.push_back(path + ": expected type " + t.dump() + ", got " + doc.type_name());
        return;
      }
    }
    if (schema.contains("enum")) {
      bool found = false;
      for (const auto& v : schema["enum"]) found = found || v == doc;
      if (!found) errors.push_back(path + ": " + doc.dump() + " not in " + schema["enum"].dump());
    }
    if (schema.contains("minimum") && doc.is_number() && doc.get<double>() < schema["minimum"].get<double>()) {
      errors.push_back(path + ": below minimum");
    }
    if (doc.is_object()) {
      for (const auto& key : schema.value("required", nlohmann::json::array())) {
        if (!doc.contains(key.get<std::string>())) errors.push_back(path + ": missing " + key.get<std::string>());
      }
      const auto props = schema.value("properties", nlohmann::json::object());
      for (const auto& [key, value] : doc.items()) {
        if (props.contains(key)) {
          visit(props[key], value, path + "." + key, errors);
        } else if (schema.contains("additionalProperties") && schema["additionalProperties"] == false) {
          errors.push_back(path + ": unexpected key " + key);
        }
      }
    }
    if (doc.is_array() && schema.contains("items")) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        visit(schema["items"], doc[i], path + "[" + std::to_string(i) + "]", errors);
      }
    }
  }

  nlohmann::json root_;
};

}  // namespace artgraph::testing
