// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/core/text.hpp"
#include "curate/error.hpp"

namespace curate::quality {

// Category labels. The vocabulary is open; these are the ones the rule
// judge and the default critical set use.
inline constexpr std::string_view kResponseDiversity = "Response Diversity";
inline constexpr std::string_view kHighDifficulty = "Capability to Handle High Difficulty Tasks";
inline constexpr std::string_view kMultilingualBalance = "Multilingual Performance Balance";
inline constexpr std::string_view kSpecializedCapabilities = "Securing Specialized Capabilities";
inline constexpr std::string_view kSystemPromptAcceptability = "System Prompt Acceptability";
inline constexpr std::string_view kInstructionFollowing = "Instruction Following";
inline constexpr std::string_view kNewTaskGeneralization = "New Task Generalization";
inline constexpr std::string_view kCulturalAlignment = "Cultural and Contextual Alignment";
inline constexpr std::string_view kSafetyBalance = "Safety Balance";
inline constexpr std::string_view kHonestyTransparency = "Honesty & Transparency";
inline constexpr std::string_view kRoleConsistency = "Role Consistency";
inline constexpr std::string_view kResponseConsistency = "Response Consistency";
// Not an assessment criterion: marks a sample whose judge never produced a
// usable verdict. Minor by default, so such samples land in Review.
inline constexpr std::string_view kJudgeOutputInvalid = "Judge Output Invalid";

inline const std::vector<std::string>& known_categories() {
  static const std::vector<std::string> v = {
      std::string(kResponseDiversity),        std::string(kHighDifficulty),
      std::string(kMultilingualBalance),      std::string(kSpecializedCapabilities),
      std::string(kSystemPromptAcceptability), std::string(kInstructionFollowing),
      std::string(kNewTaskGeneralization),    std::string(kCulturalAlignment),
      std::string(kSafetyBalance),            std::string(kHonestyTransparency),
      std::string(kRoleConsistency),          std::string(kResponseConsistency),
      std::string(kJudgeOutputInvalid)};
  return v;
}

inline bool is_known_category(std::string_view c) {
  for (const auto& k : known_categories())
    if (k == c) return true;
  return false;
}

struct Issue {
  std::string category;
  std::string explanation;
  bool operator==(const Issue&) const = default;
};

/// valid == issues.empty() always; the factories below are the only way to
/// build one outside of parsing.
class QualityVerdict {
 public:
  static QualityVerdict pass() { return QualityVerdict(); }
  static QualityVerdict fail(std::vector<Issue> issues) {
    if (issues.empty()) throw Error(ErrorCode::contract_violation, "an invalid verdict needs at least one issue");
    QualityVerdict v;
    v.valid_ = false;
    v.issues_ = std::move(issues);
    return v;
  }

  bool valid() const { return valid_; }
  const std::vector<Issue>& issues() const { return issues_; }
  bool operator==(const QualityVerdict&) const = default;

 private:
  QualityVerdict() = default;
  bool valid_ = true;
  std::vector<Issue> issues_;
};

inline Record verdict_to_record(const QualityVerdict& v) {
  Record r = Record::object();
  r["valid"] = v.valid();
  Record arr = Record::array();
  for (const auto& i : v.issues()) arr.push_back({{"category", i.category}, {"explanation", i.explanation}});
  r["issues"] = std::move(arr);
  return r;
}

/// Wire form with ", " and ": " separators: {"valid": true, "issues": []}
inline std::string serialize_verdict(const QualityVerdict& v) {
  auto str = [](const std::string& s) { return Record(s).dump(); };
  std::string out = std::string("{\"valid\": ") + (v.valid() ? "true" : "false") + ", \"issues\": [";
  for (std::size_t k = 0; k < v.issues().size(); ++k) {
    if (k) out += ", ";
    out += "{\"category\": " + str(v.issues()[k].category) + ", \"explanation\": " + str(v.issues()[k].explanation) +
           "}";
  }
  return out + "]}";
}

/// Strict contract check on judge output. Surrounding whitespace and a
/// single ```json fence are tolerated; anything else is a violation.
inline QualityVerdict parse_verdict(std::string_view raw) {
  auto fail = [](const std::string& why) { return Error(ErrorCode::contract_violation, why); };
  std::string body(text::trim(raw));
  if (text::starts_with(body, "```")) {
    auto nl = body.find('\n');
    auto close = body.rfind("```");
    if (nl == std::string::npos || close <= nl) throw fail("unterminated fence around judge output");
    body = std::string(text::trim(std::string_view(body).substr(nl + 1, close - nl - 1)));
  }
  Record j;
  try {
    j = Record::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    throw fail("judge output is not JSON");
  }
  if (!j.is_object()) throw fail("judge output is not an object");
  for (const auto& [k, v] : j.items())
    if (k != "valid" && k != "issues") throw fail("unexpected key '" + k + "'");
  if (!j.contains("valid") || !j["valid"].is_boolean()) throw fail("'valid' must be a boolean");
  if (!j.contains("issues") || !j["issues"].is_array()) throw fail("'issues' must be an array");
  std::vector<Issue> issues;
  for (const auto& i : j["issues"]) {
    if (!i.is_object() || i.size() != 2 || !i.contains("category") || !i.contains("explanation") ||
        !i["category"].is_string() || !i["explanation"].is_string())
      throw fail("each issue must be exactly {category, explanation} strings");
    if (text::is_blank(i["category"].get<std::string>())) throw fail("issue category is blank");
    issues.push_back({i["category"].get<std::string>(), i["explanation"].get<std::string>()});
  }
  bool valid = j["valid"].get<bool>();
  if (valid != issues.empty())
    throw fail(valid ? "valid verdict carries issues" : "invalid verdict carries no issues");
  return valid ? QualityVerdict::pass() : QualityVerdict::fail(std::move(issues));
}

}  // namespace curate::quality
