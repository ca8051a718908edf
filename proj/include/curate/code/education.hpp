// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <string_view>

#include "curate/code/analysis.hpp"
#include "curate/code/executability.hpp"
#include "curate/code/language.hpp"
#include "curate/core/sample.hpp"

namespace curate::code {

/// Scores at or below this are training-incompatible.
inline constexpr int kMaxRejectedScore = 3;

struct EducationInput {
  const Sample& sample;
  Language language;
  std::string_view code;
};

/// Replaceable scorer, e.g. an external judge. Must return 1..5; anything
/// else, or an exception, routes the sample to review.
using EducationScorer = std::function<int(const EducationInput&)>;

struct EducationBreakdown {
  bool parseable = false;
  bool defines_function = false;
  bool control_flow = false;
  bool self_contained = false;
  int score = 1;
};

inline EducationBreakdown education_breakdown(std::string_view code, Language lang) {
  EducationBreakdown b;
  if (text::is_blank(code)) return b;
  b.parseable = check_executability(code, lang).executable;
  b.defines_function = has_function_definition(code, lang);
  b.control_flow = has_control_flow(code, lang);
  b.self_contained = is_self_contained(code, lang);
  b.score = 1 + int(b.parseable) + int(b.defines_function) + int(b.control_flow) + int(b.self_contained);
  // Broken code can never be retained, however many other boxes it ticks.
  if (!b.parseable) b.score = std::min(b.score, kMaxRejectedScore);
  b.score = std::clamp(b.score, 1, 5);
  return b;
}

inline int default_education_score(const EducationInput& in) {
  return education_breakdown(in.code, in.language).score;
}

inline int score_education(const Sample& sample, Language lang, const EducationScorer& scorer = {}) {
  std::string code = code_content(sample).primary_code();
  EducationInput in{sample, lang, code};
  int score = scorer ? scorer(in) : default_education_score(in);
  if (score < 1 || score > 5)
    throw Error(ErrorCode::out_of_range, "education scorer returned " + std::to_string(score) + " for '" +
                                             sample.id + "'");
  return score;
}

}  // namespace curate::code
