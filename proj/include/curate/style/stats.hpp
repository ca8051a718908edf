// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "curate/core/text.hpp"
#include "curate/error.hpp"

namespace curate::style {

struct StyleStats {
  std::size_t char_count = 0;  // code points
  std::size_t line_breaks = 0;
  double chars_per_line = 0;
  std::size_t paragraph_count = 0;
  std::size_t heading_count = 0;
  std::size_t bullet_count = 0;
  std::size_t code_block_count = 0;
  bool unclosed_fence = false;
  bool operator==(const StyleStats&) const = default;
};

namespace detail {

inline bool is_fence(std::string_view trimmed) {
  return text::starts_with(trimmed, "```") || text::starts_with(trimmed, "~~~");
}

inline bool is_heading(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && i < 3 && line[i] == ' ') ++i;
  std::size_t hashes = 0;
  while (i + hashes < line.size() && line[i + hashes] == '#') ++hashes;
  if (hashes < 1 || hashes > 6) return false;
  std::size_t after = i + hashes;
  return after < line.size() && (line[after] == ' ' || line[after] == '\t');
}

/// Marker must be followed by whitespace, so "**bold**" and "---" are not bullets.
inline bool is_bullet(std::string_view line) {
  std::string_view t = text::trim(line);
  if (t.size() < 2) return false;
  if (t[0] == '-' || t[0] == '*' || t[0] == '+') return text::is_space(t[1]);
  std::size_t i = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i == 0 || i > 9 || i + 1 >= t.size()) return false;
  return (t[i] == '.' || t[i] == ')') && text::is_space(t[i + 1]);
}

}  // namespace detail

/// Headings and bullets inside a closed fenced block are code, not structure.
inline StyleStats analyze(std::string_view s) {
  StyleStats st;
  st.char_count = text::codepoint_count(s);
  for (char c : s)
    if (c == '\n') ++st.line_breaks;
  st.chars_per_line = static_cast<double>(st.char_count) / static_cast<double>(st.line_breaks + 1);

  // split keeping every line, including a trailing empty one
  std::vector<std::string_view> lines;
  for (std::size_t start = 0;;) {
    std::size_t nl = s.find('\n', start);
    std::string_view line = s.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }

  std::vector<bool> in_code(lines.size(), false);
  std::size_t open = 0;
  bool inside = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::is_fence(text::trim(lines[i]))) {
      if (inside) {
        ++st.code_block_count;
        for (std::size_t k = open; k <= i; ++k) in_code[k] = true;
      } else {
        open = i;
      }
      inside = !inside;
    }
  }
  st.unclosed_fence = inside;

  bool prev_blank = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    bool blank = text::is_blank(lines[i]);
    if (!blank && prev_blank) ++st.paragraph_count;
    prev_blank = blank;
    if (blank || in_code[i]) continue;
    if (detail::is_heading(lines[i])) ++st.heading_count;
    else if (detail::is_bullet(lines[i])) ++st.bullet_count;
  }
  return st;
}

inline constexpr std::array<std::string_view, 7> kColumns = {
    "Character", "Line Break", "Characters/Line", "Paragraph", "Heading", "Bullet", "Code Block"};

inline std::array<double, 7> columns(const StyleStats& s) {
  return {static_cast<double>(s.char_count),      static_cast<double>(s.line_breaks),
          s.chars_per_line,                       static_cast<double>(s.paragraph_count),
          static_cast<double>(s.heading_count),   static_cast<double>(s.bullet_count),
          static_cast<double>(s.code_block_count)};
}

/// Sums and a count, so partial aggregates merge exactly. Characters/Line
/// is the mean of per-document ratios.
struct StyleAggregate {
  std::array<double, 7> sums{};
  std::size_t count = 0;
  std::size_t unclosed_fences = 0;

  void add(const StyleStats& s) {
    auto c = columns(s);
    for (std::size_t i = 0; i < c.size(); ++i) sums[i] += c[i];
    ++count;
    if (s.unclosed_fence) ++unclosed_fences;
  }
  void merge(const StyleAggregate& o) {
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += o.sums[i];
    count += o.count;
    unclosed_fences += o.unclosed_fences;
  }
  std::array<double, 7> means() const {
    if (count == 0) throw Error(ErrorCode::invalid_argument, "no documents to average");
    std::array<double, 7> m{};
    for (std::size_t i = 0; i < sums.size(); ++i) m[i] = sums[i] / static_cast<double>(count);
    return m;
  }
};

inline std::array<double, 7> aggregate(const std::vector<StyleStats>& stats) {
  if (stats.empty()) throw Error(ErrorCode::invalid_argument, "aggregate needs at least one document");
  StyleAggregate a;
  for (const auto& s : stats) a.add(s);
  return a.means();
}

}  // namespace curate::style
