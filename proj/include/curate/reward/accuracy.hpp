// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <regex>
#include <string>
#include <string_view>

#include "curate/code/fences.hpp"
#include "curate/reward/outcome.hpp"

namespace curate::reward {

struct RunResult {
  std::size_t passed = 0;
  std::size_t total = 0;
};

/// Executes extracted code against the task's tests. Throwing means the
/// runner itself failed, not the code.
using TestRunner = std::function<RunResult(const std::string& code, const std::string& language)>;

/// Replays precomputed results keyed by the exact extracted code.
class ReplayRunner {
 public:
  void add(std::string code, RunResult r) { results_[std::move(code)] = r; }
  RunResult operator()(const std::string& code, const std::string&) const {
    auto it = results_.find(code);
    if (it == results_.end()) throw Error(ErrorCode::runner_unavailable, "no recorded result for this code");
    return it->second;
  }

 private:
  std::map<std::string, RunResult> results_;
};

/// Last closed fenced block, if any.
inline std::optional<code::CodeBlock> last_code_block(std::string_view text) {
  auto blocks = code::extract_code_blocks(text);
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
    if (it->closed) return *it;
  return std::nullopt;
}

inline RewardOutcome code_reward(std::string_view response, const TestRunner& runner) {
  auto block = last_code_block(response);
  if (!block) return penalty(OutcomeKind::penalty_format, "no fenced code block");
  if (!runner) throw Error(ErrorCode::runner_unavailable, "no test runner configured");
  RunResult r;
  try {
    r = runner(block->content, block->tag);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::runner_unavailable) throw;
    throw Error(ErrorCode::runner_unavailable, e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::runner_unavailable, e.what());
  }
  if (r.total == 0 || r.passed > r.total)
    throw Error(ErrorCode::runner_unavailable, "runner reported " + std::to_string(r.passed) + "/" +
                                                   std::to_string(r.total) + " tests");
  double raw = static_cast<double>(r.passed) / static_cast<double>(r.total);
  return accuracy(raw, std::to_string(r.passed) + "/" + std::to_string(r.total) + " tests passed");
}

/// The answer pattern's first capture group is the choice label. The last
/// match in the response wins, so earlier text cannot change the outcome.
struct AnswerFormat {
  std::string pattern = R"((?:^|\n)[ \t]*Answer:[ \t]*\(?([A-Za-z])\)?[ \t.]*(?=\n|$))";
  bool case_insensitive = true;
};

inline std::optional<std::string> extract_choice(std::string_view response, const AnswerFormat& fmt = {}) {
  std::regex re(fmt.pattern);
  std::string s(response);
  std::optional<std::string> last;
  for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it)
    if (it->size() > 1) last = (*it)[1].str();
  return last;
}

inline RewardOutcome choice_reward(std::string_view response, std::string_view gold, const AnswerFormat& fmt = {}) {
  auto got = extract_choice(response, fmt);
  if (!got) return penalty(OutcomeKind::penalty_format, "no answer matching the expected format");
  std::string a = *got, g(gold);
  if (fmt.case_insensitive) a = text::to_lower(a), g = text::to_lower(g);
  bool ok = a == g;
  return accuracy(ok ? 1.0 : 0.0, "answer " + *got + (ok ? " matches" : " differs from") + " gold " + std::string(gold));
}

}  // namespace curate::reward
