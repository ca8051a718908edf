// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "curate/core/text.hpp"

namespace curate {

/// Maps text to a token count. Real tokenizers plug in here.
using LengthFn = std::function<std::size_t(std::string_view)>;

/// Splits text into proxy tokens: every ASCII punctuation mark stands alone,
/// and each maximal run of other non-whitespace characters is one token.
inline std::vector<std::string_view> proxy_tokens(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (text::is_space(c)) {
      ++i;
    } else if (text::is_ascii_punct(c)) {
      tokens.push_back(text.substr(i, 1));
      ++i;
    } else {
      std::size_t j = i + 1;
      while (j < text.size() && !text::is_space(text[j]) && !text::is_ascii_punct(text[j])) ++j;
      tokens.push_back(text.substr(i, j - i));
      i = j;
    }
  }
  return tokens;
}

inline std::size_t default_length(std::string_view text) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (text::is_space(c)) {
      ++i;
    } else if (text::is_ascii_punct(c)) {
      ++n;
      ++i;
    } else {
      ++n;
      while (i < text.size() && !text::is_space(text[i]) && !text::is_ascii_punct(text[i])) ++i;
    }
  }
  return n;
}

inline LengthFn default_length_fn() { return [](std::string_view t) { return default_length(t); }; }

inline std::size_t measure_length(std::string_view text, const LengthFn& length_fn = default_length_fn()) {
  return length_fn(text);
}

}  // namespace curate
