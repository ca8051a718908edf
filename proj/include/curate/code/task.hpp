// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "curate/code/analysis.hpp"
#include "curate/code/executability.hpp"
#include "curate/code/fences.hpp"
#include "curate/code/language.hpp"
#include "curate/core/sample.hpp"

namespace curate::code {

enum class CodeTask { CodeGeneration, SelfRepair, TestOutputPrediction, CodeExecution };

constexpr std::string_view to_string(CodeTask t) {
  switch (t) {
    case CodeTask::CodeGeneration: return "CodeGeneration";
    case CodeTask::SelfRepair: return "SelfRepair";
    case CodeTask::TestOutputPrediction: return "TestOutputPrediction";
    case CodeTask::CodeExecution: return "CodeExecution";
  }
  return "CodeGeneration";
}

inline std::optional<CodeTask> parse_task(std::string_view s) {
  for (auto t : {CodeTask::CodeGeneration, CodeTask::SelfRepair, CodeTask::TestOutputPrediction,
                 CodeTask::CodeExecution})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

struct UserCode {
  std::string code;
  Language language = Language::other;
};

namespace detail {

inline bool any_cue(const std::string& lowered, std::initializer_list<std::string_view> cues) {
  for (auto c : cues)
    if (lowered.find(c) != std::string::npos) return true;
  return false;
}

inline bool looks_like_statement_line(std::string_view line) {
  static const std::regex re(
      R"(^\s*(def |class |function |#include|import |from \S+ import |public |private |static |int |void |fn |func |let |const |var |return |for \(|while \(|if \())");
  std::string l(line);
  if (std::regex_search(l, re)) return true;
  std::string_view t = text::trim(line);
  if (t.empty()) return false;
  char last = t.back();
  return (last == '{' || last == ';' || t == "}" || (last == ':' && t.find(')') != std::string_view::npos)) &&
         t.find(' ') != std::string_view::npos;
}

}  // namespace detail

/// Code supplied in the user turn: every nonblank fenced block, or else the
/// unfenced text from the first statement-looking line on.
inline std::vector<UserCode> user_code(const Sample& s, const AliasTable& aliases = {}) {
  std::vector<UserCode> out;
  std::string user = s.joined(Role::user);
  for (const auto& b : extract_code_blocks(user)) {
    if (text::is_blank(b.content)) continue;
    Language lang = b.tag.empty() ? classify_by_signatures(b.content) : aliases.resolve(b.tag);
    out.push_back({b.content, lang});
  }
  if (!out.empty()) return out;
  std::string region;
  bool started = false;
  for (auto line : text::split_lines(user)) {
    if (detail::looks_like_statement_line(line)) started = true;
    if (started) {
      region += line;
      region += '\n';
    }
  }
  if (started) out.push_back({region, classify_by_signatures(region)});
  return out;
}

/// A complete problem-solving program: parses and defines something callable
/// or runs at least a few statements.
inline bool is_complete_program(const UserCode& uc) {
  if (!check_executability(uc.code, uc.language).executable) return false;
  if (uc.language == Language::other) return false;
  if (has_function_definition(uc.code, uc.language)) return true;
  std::size_t nonblank = 0;
  for (auto l : text::split_lines(uc.code))
    if (!text::is_blank(l)) ++nonblank;
  return nonblank >= 3;
}

struct TaskCues {
  bool has_code = false;
  bool failure = false;
  bool fix_request = false;
  bool tests = false;
  bool output_request = false;
  bool concrete_input = false;
  bool complete_program = false;
};

inline TaskCues task_cues(const Sample& s, const AliasTable& aliases = {}) {
  if (!s.first_with_role(Role::user))
    throw Error(ErrorCode::malformed_sample, "sample '" + s.id + "' has no user message");
  TaskCues c;
  std::string prose = text::to_lower(prose_outside_blocks(s.joined(Role::user)));
  std::string all = text::to_lower(s.joined(Role::user));
  auto code = user_code(s, aliases);
  c.has_code = !code.empty();
  c.complete_program = std::any_of(code.begin(), code.end(), [](const UserCode& u) { return is_complete_program(u); });
  c.failure = detail::any_cue(all, {"traceback", "error", "exception", "throws", "raises", "crash", "fails",
                                    "failing", "failed", "wrong answer", "segmentation fault", "segfault",
                                    "doesn't work", "does not work", "not working", "bug", "incorrect output",
                                    "stack trace", "panic:", "wrong result"});
  c.fix_request = detail::any_cue(prose, {"fix", "repair", "debug", "correct it", "correct this", "what's wrong",
                                          "what is wrong", "why does", "why is", "resolve"});
  c.tests = detail::any_cue(prose, {"test", "assert"}) || detail::any_cue(all, {"assert "});
  c.output_request = detail::any_cue(prose, {"output", "result", "return", "print", "what does", "what will",
                                             "evaluate", "predict", "produce"});
  static const std::regex literal(R"((\[[^\]]*\]|\(\s*-?\d|\b-?\d+\b|"[^"]*"|'[^']*'))");
  c.concrete_input = detail::any_cue(prose, {"input", "given", "called with", "argument", "when n", "with n"}) ||
                     std::regex_search(prose, literal);
  return c;
}

/// Ordered rules, then the post-processing rule: a prompt that already holds
/// a complete program is never CodeGeneration.
inline CodeTask classify_task(const Sample& s, const AliasTable& aliases = {}) {
  TaskCues c = task_cues(s, aliases);
  CodeTask t = CodeTask::CodeGeneration;
  if (c.has_code && c.failure && c.fix_request) t = CodeTask::SelfRepair;
  else if (c.has_code && c.tests && c.output_request) t = CodeTask::TestOutputPrediction;
  else if (c.has_code && c.concrete_input && c.output_request) t = CodeTask::CodeExecution;
  if (t == CodeTask::CodeGeneration && c.complete_program) {
    if (c.failure) t = CodeTask::SelfRepair;
    else if (c.tests) t = CodeTask::TestOutputPrediction;
    else t = CodeTask::CodeExecution;
  }
  return t;
}

}  // namespace curate::code
