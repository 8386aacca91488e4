#pragma once

// A small JSON Schema checker covering the keywords used by docs/schemas:
// type, enum, oneOf, properties, required, additionalProperties (false only),
// items, minItems, maxItems, minimum, maximum, exclusiveMinimum.

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace steerwork::testing {

inline bool matches_type(const nlohmann::json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  throw std::invalid_argument("unknown schema type " + type);
}

inline void validate(const nlohmann::json& v, const nlohmann::json& schema, const std::string& path,
                     std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    const nlohmann::json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = matches_type(v, t);
    } else {
      for (const auto& alt : t) ok = ok || matches_type(v, alt);
    }
    if (!ok) {
      errors.push_back(path + ": expected type " + t.dump() + ", got " + v.dump());
      return;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == v;
    if (!found) errors.push_back(path + ": " + v.dump() + " not in enum");
  }
  if (schema.contains("oneOf")) {
    int hits = 0;
    for (const auto& alt : schema["oneOf"]) {
      std::vector<std::string> sub;
      validate(v, alt, path, sub);
      hits += sub.empty() ? 1 : 0;
    }
    if (hits != 1) errors.push_back(path + ": matches " + std::to_string(hits) + " oneOf branches");
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>())
      errors.push_back(path + ": below minimum");
    if (schema.contains("maximum") && x > schema["maximum"].get<double>())
      errors.push_back(path + ": above maximum");
    if (schema.contains("exclusiveMinimum") && x <= schema["exclusiveMinimum"].get<double>())
      errors.push_back(path + ": not above exclusiveMinimum");
  }
  if (v.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!v.contains(key.get<std::string>())) errors.push_back(path + ": missing " + key.dump());
      }
    }
    const nlohmann::json props = schema.value("properties", nlohmann::json::object());
    for (const auto& [key, value] : v.items()) {
      if (props.contains(key)) {
        validate(value, props[key], path + "." + key, errors);
      } else if (schema.contains("additionalProperties") && !schema["additionalProperties"].get<bool>()) {
        errors.push_back(path + ": unexpected property " + key);
      }
    }
  }
  if (v.is_array()) {
    if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>())
      errors.push_back(path + ": too few items");
    if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>())
      errors.push_back(path + ": too many items");
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i)
        validate(v[i], schema["items"], path + "[" + std::to_string(i) + "]", errors);
    }
  }
}

inline std::vector<std::string> validate(const nlohmann::json& v, const nlohmann::json& schema) {
  std::vector<std::string> errors;
  validate(v, schema, "$", errors);
  return errors;
}

inline nlohmann::json load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema " + path);
  return nlohmann::json::parse(in);
}

}  // namespace steerwork::testing
