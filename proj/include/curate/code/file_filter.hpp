// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "curate/code/analysis.hpp"
#include "curate/code/language.hpp"
#include "curate/core/sample.hpp"
#include "curate/error.hpp"

namespace curate::code {

struct FileLevelThresholds {
  double code_ratio = 0.3;        // below this a sample counts as prose-heavy
  double low_ratio_share = 0.5;   // rule (a)
  double low_quality_share = 0.6; // rule (b)
  double unrelated_share = 0.5;   // rule (c)
};

struct FileSignals {
  double code_ratio = 0;
  int quality_score = 0;
  std::size_t definition_groups = 0;
};

struct FileLevelDecision {
  bool keep = true;
  double low_ratio_fraction = 0;
  double low_quality_fraction = 0;
  double unrelated_fraction = 0;
  std::string reason;  // empty when kept
};

/// Code over code plus prose, in code points, over the assistant text (all
/// text for prompt-only samples). Fence lines count as neither; raw-code
/// samples are all code.
inline double code_nl_ratio(const Sample& s) {
  if (is_raw_code(s)) return 1.0;
  std::string body = s.first_with_role(Role::assistant) ? s.joined(Role::assistant) : s.concatenated_text();
  std::size_t code = 0;
  for (const auto& b : extract_code_blocks(body)) code += text::codepoint_count(b.content);
  std::size_t prose = text::codepoint_count(text::trim(prose_outside_blocks(body)));
  if (code + prose == 0) return 0.0;
  return static_cast<double>(code) / static_cast<double>(code + prose);
}

inline FileSignals file_signals(const Sample& s, Language lang, int quality_score) {
  FileSignals f;
  f.code_ratio = code_nl_ratio(s);
  f.quality_score = quality_score;
  f.definition_groups = unrelated_definition_groups(code_content(s).primary_code(), lang);
  return f;
}

/// Rule-based decision for one source. Each rule fires only when its share
/// strictly exceeds its threshold.
inline FileLevelDecision filter_file_level(const std::vector<FileSignals>& group,
                                           const FileLevelThresholds& t = {}) {
  if (group.empty()) throw Error(ErrorCode::empty_group, "file-level filter needs a nonempty group");
  std::size_t low_ratio = 0, low_quality = 0, unrelated = 0;
  for (const auto& f : group) {
    low_ratio += f.code_ratio < t.code_ratio;
    low_quality += f.quality_score <= 3;
    unrelated += f.definition_groups > 1;
  }
  double n = static_cast<double>(group.size());
  FileLevelDecision d;
  d.low_ratio_fraction = low_ratio / n;
  d.low_quality_fraction = low_quality / n;
  d.unrelated_fraction = unrelated / n;
  auto fire = [&](double share, double limit, const char* what) {
    if (share > limit && d.keep) {
      d.keep = false;
      d.reason = std::string(what) + " share " + std::to_string(share) + " > " + std::to_string(limit);
    }
  };
  fire(d.low_ratio_fraction, t.low_ratio_share, "low code/NL ratio");
  fire(d.low_quality_fraction, t.low_quality_share, "low quality score");
  fire(d.unrelated_fraction, t.unrelated_share, "unrelated definitions");
  return d;
}

/// Convenience overload over samples already carrying language and
/// quality_score metadata.
inline FileLevelDecision filter_file_level(const std::vector<Sample>& group, const FileLevelThresholds& t = {}) {
  if (group.empty()) throw Error(ErrorCode::empty_group, "file-level filter needs a nonempty group");
  std::vector<FileSignals> signals;
  for (const auto& s : group) {
    if (!s.has_meta("quality_score") || !s.meta["quality_score"].is_number_integer())
      throw Error(ErrorCode::missing_key, "sample '" + s.id + "' lacks integer meta 'quality_score'");
    Language lang = Language::other;
    if (s.has_meta("language") && s.meta["language"].is_string())
      lang = parse_language(s.meta["language"].get<std::string>()).value_or(Language::other);
    signals.push_back(file_signals(s, lang, s.meta["quality_score"].get<int>()));
  }
  return filter_file_level(signals, t);
}

}  // namespace curate::code
