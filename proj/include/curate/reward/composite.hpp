// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <variant>

#include "curate/reward/accuracy.hpp"
#include "curate/reward/penalty.hpp"
#include "curate/reward/schema.hpp"

namespace curate::reward {

struct CodeTask {
  TestRunner runner;
};
struct ChoiceTask {
  std::string gold;
  AnswerFormat format;
};
struct SchemaTask {
  Record schema;
  SchemaMode mode = SchemaMode::binary;
};

using RewardTask = std::variant<CodeTask, ChoiceTask, SchemaTask>;

/// Penalties first; accuracy is only computed when none fires. Accuracy
/// checks see the text after the reasoning block.
inline RewardOutcome evaluate(std::string_view response, const RewardTask& task, const PenaltyRules& rules = {}) {
  if (auto p = shared_penalty(response, rules)) return *p;
  std::string_view answer = final_answer(response, rules);
  if (const auto* c = std::get_if<CodeTask>(&task)) return code_reward(answer, c->runner);
  if (const auto* c = std::get_if<ChoiceTask>(&task)) return choice_reward(answer, c->gold, c->format);
  const auto& s = std::get<SchemaTask>(task);
  auto instance = extract_json(answer);
  if (!instance) return penalty(OutcomeKind::penalty_format, "response does not contain parseable JSON");
  return schema_reward(*instance, s.schema, s.mode);
}

}  // namespace curate::reward
