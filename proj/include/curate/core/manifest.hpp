// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/core/sample.hpp"

namespace curate {

namespace detail {

inline Error record_error(std::size_t line, const std::string& msg) {
  return Error(ErrorCode::malformed_record, "line " + std::to_string(line) + ": " + msg);
}

}  // namespace detail

inline Record sample_to_record(const Sample& s) {
  Record r = Record::object();
  r["id"] = s.id;
  r["source"] = s.source;
  Record msgs = Record::array();
  for (const auto& m : s.messages) {
    Record jm = Record::object();
    jm["role"] = std::string(to_string(m.role));
    jm["content"] = m.content;
    msgs.push_back(std::move(jm));
  }
  r["messages"] = std::move(msgs);
  r["meta"] = s.meta;
  return r;
}

/// Builds a sample from one manifest record. `line` is only used in errors.
inline Sample sample_from_record(const Record& r, std::size_t line,
                                 const LengthFn& length_fn = default_length_fn()) {
  if (!r.is_object()) throw detail::record_error(line, "record is not an object");
  for (const auto& [key, value] : r.items()) {
    // stored lengths are accepted but ignored; they are always recomputed
    if (key != "id" && key != "source" && key != "messages" && key != "meta" && key != "length_chars" &&
        key != "length_tokens")
      throw detail::record_error(line, "unknown field '" + key + "'");
  }
  if (!r.contains("id") || !r["id"].is_string() || r["id"].get_ref<const std::string&>().empty())
    throw detail::record_error(line, "field 'id' must be a nonempty string");
  std::string source;
  if (r.contains("source")) {
    if (!r["source"].is_string()) throw detail::record_error(line, "field 'source' must be a string");
    source = r["source"].get<std::string>();
  }
  if (!r.contains("messages") || !r["messages"].is_array())
    throw detail::record_error(line, "field 'messages' must be an array");
  std::vector<Message> messages;
  for (const auto& jm : r["messages"]) {
    if (!jm.is_object() || !jm.contains("role") || !jm.contains("content") || !jm["role"].is_string() ||
        !jm["content"].is_string() || jm.size() != 2)
      throw detail::record_error(line, "each message must be exactly {role, content} strings");
    auto role = parse_role(jm["role"].get<std::string>());
    if (!role) throw detail::record_error(line, "unknown role '" + jm["role"].get<std::string>() + "'");
    messages.push_back({*role, jm["content"].get<std::string>()});
  }
  Meta meta = Meta::object();
  if (r.contains("meta")) {
    if (!r["meta"].is_object()) throw detail::record_error(line, "field 'meta' must be an object");
    meta = r["meta"];
  }
  try {
    return make_sample(r["id"].get<std::string>(), std::move(source), std::move(messages), std::move(meta),
                       length_fn);
  } catch (const Error& e) {
    throw detail::record_error(line, e.what());
  }
}

/// Parses manifest text. Lengths are recomputed, never read from the file.
inline std::vector<Sample> parse_manifest(const std::string& contents, const std::string& what = "manifest",
                                          const LengthFn& length_fn = default_length_fn()) {
  std::vector<Sample> out;
  std::unordered_map<std::string, std::size_t> first_line;
  for (const auto& [line, record] : parse_json_lines(contents, what)) {
    Sample s = sample_from_record(record, line, length_fn);
    auto [it, inserted] = first_line.emplace(s.id, line);
    if (!inserted) {
      throw Error(ErrorCode::duplicate_id, what + ": id '" + s.id + "' on lines " + std::to_string(it->second) +
                                               " and " + std::to_string(line));
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<Sample> load_manifest(const std::filesystem::path& path,
                                         const LengthFn& length_fn = default_length_fn()) {
  return parse_manifest(read_file(path), "'" + path.string() + "'", length_fn);
}

inline std::string render_manifest(const std::vector<Sample>& samples) {
  std::unordered_map<std::string, std::size_t> seen;
  std::string out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!seen.emplace(samples[i].id, i).second)
      throw Error(ErrorCode::duplicate_id, "id '" + samples[i].id + "' appears more than once");
    out += dump_record(sample_to_record(samples[i]));
    out += '\n';
  }
  return out;
}

inline void write_manifest(const std::vector<Sample>& samples, const std::filesystem::path& path) {
  write_file(path, render_manifest(samples));
}

}  // namespace curate
