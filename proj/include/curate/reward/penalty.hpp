// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "curate/core/length.hpp"
#include "curate/reward/outcome.hpp"

namespace curate::reward {

struct PenaltyRules {
  std::string reasoning_open = "<think>";
  std::string reasoning_close = "</think>";
  /// Responses that start inside the reasoning block (the opener lives in
  /// the prompt template) must still contain the closer.
  bool reasoning_required = false;
  std::vector<std::string> special_tokens = {"<|endoftext|>", "<|im_end|>", "<|im_start|>", "<|eot_id|>", "</s>",
                                             "<|end|>", "<think>", "</think>"};
  std::size_t max_consecutive_special = 8;
  std::size_t ngram = 20;
  std::size_t ngram_max_occurrences = 4;  // fires at this many or more
};

namespace detail {

inline std::optional<std::string> reasoning_problem(std::string_view r, const PenaltyRules& rules) {
  if (rules.reasoning_open.empty() || rules.reasoning_close.empty()) return std::nullopt;
  std::size_t depth = 0, closes = 0;
  for (std::size_t i = 0; i < r.size();) {
    if (r.compare(i, rules.reasoning_close.size(), rules.reasoning_close) == 0) {
      if (depth == 0 && !(rules.reasoning_required && closes == 0))
        return "reasoning terminator without an opener";
      if (depth > 0) --depth;
      ++closes;
      i += rules.reasoning_close.size();
    } else if (r.compare(i, rules.reasoning_open.size(), rules.reasoning_open) == 0) {
      if (depth > 0) return "nested reasoning opener";
      ++depth;
      i += rules.reasoning_open.size();
    } else {
      ++i;
    }
  }
  if (depth > 0) return "reasoning block never terminated";
  if (rules.reasoning_required && closes == 0) return "reasoning terminator missing";
  return std::nullopt;
}

inline std::optional<std::string> special_run(std::string_view r, const PenaltyRules& rules) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (const auto& tok : rules.special_tokens) {
      if (tok.empty() || r.compare(i, tok.size(), tok) != 0) continue;
      std::size_t run = 0, j = i;
      while (j < r.size() && r.compare(j, tok.size(), tok) == 0) {
        ++run;
        j += tok.size();
        while (j < r.size() && text::is_space(r[j])) ++j;
      }
      if (run > rules.max_consecutive_special)
        return tok + " repeated " + std::to_string(run) + " times in a row";
      break;
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> ngram_repeat(std::string_view r, const PenaltyRules& rules) {
  if (rules.ngram == 0 || rules.ngram_max_occurrences < 2) return std::nullopt;
  // special tokens are one token each, not their punctuation pieces
  std::vector<std::string> toks;
  std::size_t chunk = 0;
  auto flush = [&](std::size_t end) {
    for (auto& t : proxy_tokens(r.substr(chunk, end - chunk))) toks.emplace_back(t);
  };
  for (std::size_t i = 0; i < r.size();) {
    const std::string* hit = nullptr;
    for (const auto& tok : rules.special_tokens)
      if (!tok.empty() && r.compare(i, tok.size(), tok) == 0) {
        hit = &tok;
        break;
      }
    if (!hit) {
      ++i;
      continue;
    }
    flush(i);
    toks.push_back(*hit);
    i += hit->size();
    chunk = i;
  }
  flush(r.size());
  if (toks.size() < rules.ngram) return std::nullopt;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i + rules.ngram <= toks.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < rules.ngram; ++k) {
      key += toks[i + k];
      key += '\x1f';
    }
    if (++seen[key] >= rules.ngram_max_occurrences)
      return std::to_string(rules.ngram) + "-token window repeated " + std::to_string(rules.ngram_max_occurrences) +
             " times";
  }
  return std::nullopt;
}

}  // namespace detail

/// Format first, then special-token runs, then n-gram loops. When this
/// returns a value, accuracy rewards must not be computed.
inline std::optional<RewardOutcome> shared_penalty(std::string_view response, const PenaltyRules& rules = {}) {
  if (auto why = detail::reasoning_problem(response, rules)) return penalty(OutcomeKind::penalty_format, *why);
  if (auto why = detail::special_run(response, rules)) return penalty(OutcomeKind::penalty_repetition, *why);
  if (auto why = detail::ngram_repeat(response, rules)) return penalty(OutcomeKind::penalty_repetition, *why);
  return std::nullopt;
}

/// Text after the last reasoning terminator; the whole response if none.
inline std::string_view final_answer(std::string_view response, const PenaltyRules& rules = {}) {
  if (rules.reasoning_close.empty()) return response;
  auto at = response.rfind(rules.reasoning_close);
  return at == std::string_view::npos ? response : response.substr(at + rules.reasoning_close.size());
}

}  // namespace curate::reward
