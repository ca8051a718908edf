// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "curate/core/text.hpp"

namespace curate::code {

struct CodeBlock {
  std::string tag;  // first word of the info string, as written; empty if untagged
  std::string content;
  bool closed = true;
};

namespace detail {

/// Returns the backtick run length if `line` opens or closes a fence.
inline std::size_t fence_width(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && i < 3 && line[i] == ' ') ++i;
  std::size_t n = 0;
  while (i + n < line.size() && line[i + n] == '`') ++n;
  return n >= 3 ? n : 0;
}

}  // namespace detail

/// Fenced ``` blocks in order of appearance. An unterminated fence yields a
/// block running to the end of the text with closed=false.
inline std::vector<CodeBlock> extract_code_blocks(std::string_view text) {
  std::vector<CodeBlock> blocks;
  auto lines = text::split_lines(text);
  std::size_t i = 0;
  while (i < lines.size()) {
    std::size_t width = detail::fence_width(lines[i]);
    if (width == 0) {
      ++i;
      continue;
    }
    std::string_view info = text::trim(lines[i]);
    info.remove_prefix(width);
    info = text::trim(info);
    CodeBlock block;
    std::size_t end = 0;
    while (end < info.size() && !text::is_space(info[end]) && info[end] != '{' && info[end] != '`') ++end;
    block.tag = std::string(info.substr(0, end));
    block.closed = false;
    ++i;
    std::string content;
    while (i < lines.size()) {
      std::size_t w = detail::fence_width(lines[i]);
      if (w >= width && text::trim(lines[i]).size() == w) {
        block.closed = true;
        ++i;
        break;
      }
      content += lines[i];
      content += '\n';
      ++i;
    }
    block.content = std::move(content);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

/// Text outside any fenced block.
inline std::string prose_outside_blocks(std::string_view text) {
  std::string out;
  auto lines = text::split_lines(text);
  bool inside = false;
  std::size_t width = 0;
  for (auto line : lines) {
    std::size_t w = detail::fence_width(line);
    if (!inside && w > 0) {
      inside = true;
      width = w;
      continue;
    }
    if (inside && w >= width && text::trim(line).size() == w) {
      inside = false;
      continue;
    }
    if (!inside) {
      out += line;
      out += '\n';
    }
  }
  return out;
}

}  // namespace curate::code
