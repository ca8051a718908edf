// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "curate/code/fences.hpp"
#include "curate/core/records.hpp"
#include "curate/reward/outcome.hpp"

namespace curate::reward {

/// Structural subset: type, required, properties, items, enum, allOf, anyOf,
/// oneOf, with arbitrary nesting. Annotation keywords are ignored; anything
/// else is rejected rather than silently skipped.
struct SchemaCheck {
  std::size_t satisfied = 0;
  std::size_t total = 0;
  std::vector<std::string> failures;  // JSON-pointer-ish path: message

  bool valid() const { return satisfied == total; }
  double fraction() const { return total == 0 ? 1.0 : static_cast<double>(satisfied) / static_cast<double>(total); }
};

namespace detail {

inline const std::set<std::string>& annotation_keywords() {
  static const std::set<std::string> k = {"$schema", "$id", "title", "description", "default", "examples",
                                          "$comment"};
  return k;
}

inline bool type_matches(const Record& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "number") return v.is_number();
  if (t == "integer") {
    if (v.is_number_integer()) return true;
    if (!v.is_number_float()) return false;
    double d = v.get<double>();
    return std::isfinite(d) && std::floor(d) == d;
  }
  throw Error(ErrorCode::unsupported_schema_feature, "unknown type '" + t + "'");
}

inline void check_schema_shape(const Record& s, const std::string& path) {
  if (s.is_boolean()) return;
  if (!s.is_object()) throw Error(ErrorCode::unsupported_schema_feature, path + ": schema must be an object");
  for (const auto& [k, v] : s.items()) {
    if (annotation_keywords().count(k)) continue;
    if (k == "type") {
      if (v.is_string()) type_matches(Record(), v.get<std::string>());
      else if (v.is_array() && !v.empty())
        for (const auto& t : v) {
          if (!t.is_string()) throw Error(ErrorCode::unsupported_schema_feature, path + ": type entries must be strings");
          type_matches(Record(), t.get<std::string>());
        }
      else throw Error(ErrorCode::unsupported_schema_feature, path + ": type must be a string or nonempty array");
    } else if (k == "required") {
      if (!v.is_array()) throw Error(ErrorCode::unsupported_schema_feature, path + ": required must be an array");
      for (const auto& r : v)
        if (!r.is_string()) throw Error(ErrorCode::unsupported_schema_feature, path + ": required entries must be strings");
    } else if (k == "properties") {
      if (!v.is_object()) throw Error(ErrorCode::unsupported_schema_feature, path + ": properties must be an object");
      for (const auto& [pk, pv] : v.items()) check_schema_shape(pv, path + "/properties/" + pk);
    } else if (k == "items") {
      check_schema_shape(v, path + "/items");
    } else if (k == "enum") {
      if (!v.is_array() || v.empty()) throw Error(ErrorCode::unsupported_schema_feature, path + ": enum must be a nonempty array");
    } else if (k == "allOf" || k == "anyOf" || k == "oneOf") {
      if (!v.is_array() || v.empty())
        throw Error(ErrorCode::unsupported_schema_feature, path + ": " + k + " must be a nonempty array");
      for (std::size_t i = 0; i < v.size(); ++i) check_schema_shape(v[i], path + "/" + k + "/" + std::to_string(i));
    } else {
      throw Error(ErrorCode::unsupported_schema_feature, path + ": keyword '" + k + "' is not supported");
    }
  }
}

inline void tally(SchemaCheck& c, bool ok, const std::string& path, const std::string& what) {
  ++c.total;
  if (ok) ++c.satisfied;
  else c.failures.push_back((path.empty() ? "/" : path) + ": " + what);
}

// Each keyword contributes constraints: type 1, each required key 1, enum 1,
// anyOf/oneOf 1, and allOf / properties / items the constraints of their
// subschemas. A false schema is one unsatisfiable constraint.
inline void evaluate(const Record& s, const Record& v, const std::string& path, SchemaCheck& c);

inline bool fully_valid(const Record& s, const Record& v) {
  SchemaCheck sub;
  evaluate(s, v, "", sub);
  return sub.valid();
}

inline void evaluate(const Record& s, const Record& v, const std::string& path, SchemaCheck& c) {
  if (s.is_boolean()) {
    if (!s.get<bool>()) tally(c, false, path, "false schema");
    return;
  }
  if (s.contains("type")) {
    const auto& t = s["type"];
    bool ok = false;
    if (t.is_string()) ok = type_matches(v, t.get<std::string>());
    else
      for (const auto& x : t) ok = ok || type_matches(v, x.get<std::string>());
    tally(c, ok, path, "expected type " + t.dump());
  }
  if (s.contains("enum")) {
    bool ok = false;
    for (const auto& e : s["enum"]) ok = ok || e == v;
    tally(c, ok, path, "value not in enum");
  }
  if (s.contains("required"))
    for (const auto& r : s["required"]) {
      std::string key = r.get<std::string>();
      tally(c, v.is_object() && v.contains(key), path, "missing required key '" + key + "'");
    }
  if (s.contains("properties") && v.is_object())
    for (const auto& [k, sub] : s["properties"].items())
      if (v.contains(k)) evaluate(sub, v[k], path + "/" + k, c);
  if (s.contains("items") && v.is_array())
    for (std::size_t i = 0; i < v.size(); ++i) evaluate(s["items"], v[i], path + "/" + std::to_string(i), c);
  if (s.contains("allOf"))
    for (const auto& sub : s["allOf"]) evaluate(sub, v, path, c);
  if (s.contains("anyOf")) {
    bool ok = false;
    for (const auto& sub : s["anyOf"]) ok = ok || fully_valid(sub, v);
    tally(c, ok, path, "no anyOf branch matches");
  }
  if (s.contains("oneOf")) {
    std::size_t n = 0;
    for (const auto& sub : s["oneOf"]) n += fully_valid(sub, v) ? 1 : 0;
    tally(c, n == 1, path, std::to_string(n) + " oneOf branches match");
  }
}

}  // namespace detail

inline SchemaCheck check_schema(const Record& instance, const Record& schema) {
  detail::check_schema_shape(schema, "#");
  SchemaCheck c;
  detail::evaluate(schema, instance, "", c);
  return c;
}

enum class SchemaMode { binary, graded };

inline RewardOutcome schema_reward(const Record& instance, const Record& schema, SchemaMode mode = SchemaMode::binary) {
  auto c = check_schema(instance, schema);
  std::string detail = std::to_string(c.satisfied) + "/" + std::to_string(c.total) + " constraints";
  if (!c.failures.empty()) detail += "; first failure " + c.failures.front();
  if (mode == SchemaMode::binary) return accuracy(c.valid() ? 1.0 : 0.0, detail);
  return accuracy(c.fraction(), detail);
}

/// JSON from the last fenced block, else from the whole text.
inline std::optional<Record> extract_json(std::string_view text) {
  std::string body(text::trim(text));
  auto blocks = code::extract_code_blocks(body);
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
    if (it->closed) {
      body = it->content;
      break;
    }
  try {
    return Record::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    return std::nullopt;
  }
}

}  // namespace curate::reward
