// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curate/core/length.hpp"
#include "curate/core/text.hpp"
#include "curate/error.hpp"
#include "json.hpp"

namespace curate {

/// Metadata keeps insertion order so that unknown keys survive a round trip
/// through any stage byte-for-byte.
using Meta = nlohmann::ordered_json;

enum class Role { system, user, assistant, tool };

constexpr std::string_view to_string(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
    case Role::tool: return "tool";
  }
  return "";
}

inline std::optional<Role> parse_role(std::string_view s) {
  if (s == "system") return Role::system;
  if (s == "user") return Role::user;
  if (s == "assistant") return Role::assistant;
  if (s == "tool") return Role::tool;
  return std::nullopt;
}

struct Message {
  Role role = Role::user;
  std::string content;

  bool operator==(const Message&) const = default;
};

struct Sample {
  std::string id;
  std::string source;
  std::vector<Message> messages;
  Meta meta = Meta::object();
  std::size_t length_chars = 0;
  std::size_t length_tokens = 0;

  bool operator==(const Sample&) const = default;

  std::string concatenated_text() const {
    std::string out;
    for (const auto& m : messages) out += m.content;
    return out;
  }

  const Message* first_with_role(Role r) const {
    for (const auto& m : messages)
      if (m.role == r) return &m;
    return nullptr;
  }

  /// Concatenation of every message with the given role, newline separated.
  std::string joined(Role r) const {
    std::string out;
    bool first = true;
    for (const auto& m : messages) {
      if (m.role != r) continue;
      if (!first) out += '\n';
      out += m.content;
      first = false;
    }
    return out;
  }

  bool has_meta(std::string_view key) const { return meta.is_object() && meta.contains(key); }
};

inline void validate_message(const Message& m) {
  if (m.content.empty() && m.role != Role::tool)
    throw Error(ErrorCode::malformed_record,
                "message with role '" + std::string(to_string(m.role)) + "' has empty content");
}

/// Recomputes the derived length fields from message contents.
inline void refresh_lengths(Sample& s, const LengthFn& length_fn = default_length_fn()) {
  std::string all = s.concatenated_text();
  s.length_chars = text::codepoint_count(all);
  s.length_tokens = length_fn(all);
}

inline Sample make_sample(std::string id, std::string source, std::vector<Message> messages,
                          Meta meta = Meta::object(), const LengthFn& length_fn = default_length_fn()) {
  if (id.empty()) throw Error(ErrorCode::malformed_record, "sample id is empty");
  for (const auto& m : messages) validate_message(m);
  Sample s;
  s.id = std::move(id);
  s.source = std::move(source);
  s.messages = std::move(messages);
  s.meta = meta.is_null() ? Meta::object() : std::move(meta);
  if (!s.meta.is_object()) throw Error(ErrorCode::malformed_record, "meta must be an object");
  refresh_lengths(s, length_fn);
  return s;
}

}  // namespace curate
