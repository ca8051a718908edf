// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "curate/core/records.hpp"
#include "curate/core/text.hpp"
#include "curate/error.hpp"

namespace curate::reward {

struct Rubric {
  double min = 1;
  double max = 5;
  bool discrete = true;  // integer scores only
};

struct JudgeResult {
  double score = 0;
  std::string reasoning;
  std::optional<std::map<std::string, double>> sub_scores;
};

/// {"score": <number>, "reasoning": <nonempty string>, "sub_scores": {<name>: <number>}?}
/// Any deviation raises contract-violation naming the field, so callers can retry.
inline JudgeResult parse_judge(std::string_view raw, const Rubric& rubric = {}) {
  auto bad = [](const std::string& field, const std::string& why) {
    return Error(ErrorCode::contract_violation, "field '" + field + "': " + why);
  };
  Record j;
  try {
    j = Record::parse(text::trim(raw));
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::contract_violation, "judge output is not JSON");
  }
  if (!j.is_object()) throw Error(ErrorCode::contract_violation, "judge output is not an object");
  for (const auto& [k, v] : j.items())
    if (k != "score" && k != "reasoning" && k != "sub_scores") throw bad(k, "unexpected field");
  if (!j.contains("score") || !j["score"].is_number()) throw bad("score", "missing or not a number");
  JudgeResult r;
  r.score = j["score"].get<double>();
  if (!std::isfinite(r.score) || r.score < rubric.min || r.score > rubric.max)
    throw bad("score", j["score"].dump() + " outside [" + Record(rubric.min).dump() + ", " + Record(rubric.max).dump() + "]");
  if (rubric.discrete && std::floor(r.score) != r.score) throw bad("score", "rubric is discrete, got " + j["score"].dump());
  if (!j.contains("reasoning") || !j["reasoning"].is_string()) throw bad("reasoning", "missing or not a string");
  r.reasoning = j["reasoning"].get<std::string>();
  if (text::is_blank(r.reasoning)) throw bad("reasoning", "empty");
  if (j.contains("sub_scores")) {
    if (!j["sub_scores"].is_object()) throw bad("sub_scores", "not an object");
    std::map<std::string, double> subs;
    for (const auto& [k, v] : j["sub_scores"].items()) {
      if (!v.is_number()) throw bad("sub_scores." + k, "not a number");
      subs[k] = v.get<double>();
    }
    r.sub_scores = std::move(subs);
  }
  return r;
}

}  // namespace curate::reward
