// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "curate/code/language.hpp"
#include "curate/code/lexing.hpp"
#include "curate/code/python_parser.hpp"

namespace curate::code {

enum class ExecReason {
  ok,
  tokenize_error,
  unbalanced_delimiters,
  indentation_inconsistent,
  grammar_violation,
  unsupported_language_approx,
};

constexpr std::string_view to_string(ExecReason r) {
  switch (r) {
    case ExecReason::ok: return "ok";
    case ExecReason::tokenize_error: return "tokenize_error";
    case ExecReason::unbalanced_delimiters: return "unbalanced_delimiters";
    case ExecReason::indentation_inconsistent: return "indentation_inconsistent";
    case ExecReason::grammar_violation: return "grammar_violation";
    case ExecReason::unsupported_language_approx: return "unsupported_language_approx";
  }
  return "ok";
}

struct SourceLocation {
  std::size_t line;    // 1-based
  std::size_t column;  // 1-based
  bool operator==(const SourceLocation&) const = default;
};

struct ExecutabilityVerdict {
  bool executable = false;
  ExecReason reason = ExecReason::grammar_violation;
  std::optional<SourceLocation> location;
  std::string detail;
};

namespace detail {

inline bool only_comments_or_blank(std::string_view code, Language lang) {
  for (auto line : text::split_lines(code)) {
    std::string_view t = text::trim(line);
    if (t.empty()) continue;
    if (lang == Language::python && t.front() == '#') continue;
    if (is_brace_language(lang) && (t.substr(0, 2) == "//" || t.substr(0, 2) == "/*" || t.front() == '*'))
      continue;
    return false;
  }
  return true;
}

inline ExecReason reason_for(python::FailureKind k) {
  switch (k) {
    case python::FailureKind::tokenize: return ExecReason::tokenize_error;
    case python::FailureKind::delimiters: return ExecReason::unbalanced_delimiters;
    case python::FailureKind::indentation: return ExecReason::indentation_inconsistent;
    case python::FailureKind::grammar: return ExecReason::grammar_violation;
  }
  return ExecReason::grammar_violation;
}

}  // namespace detail

/// Static executability check. Python gets a full parse; brace languages get
/// the delimiter automaton plus a nonempty-declaration check; sql, shell and
/// other only get delimiter balance, flagged as an approximation.
inline ExecutabilityVerdict check_executability(std::string_view code, Language lang) {
  ExecutabilityVerdict v;
  if (lang == Language::python || is_brace_language(lang)) {
    // Nothing to run. CPython would accept an empty module; a training
    // sample with no statements is not executable code.
    if (detail::only_comments_or_blank(code, lang)) {
      v.reason = ExecReason::grammar_violation;
      v.detail = "no statements";
      return v;
    }
  }
  if (lang == Language::python) {
    if (auto failure = python::check_syntax(code)) {
      v.reason = detail::reason_for(failure->kind);
      v.location = SourceLocation{failure->line, failure->column};
      v.detail = failure->message;
      return v;
    }
    v.executable = true;
    v.reason = ExecReason::ok;
    return v;
  }
  DelimiterScan scan = scan_delimiters(code, lang);
  if (scan.issue) {
    v.reason = scan.issue->unterminated_literal ? ExecReason::tokenize_error : ExecReason::unbalanced_delimiters;
    v.location = SourceLocation{scan.issue->line, scan.issue->column};
    v.detail = scan.issue->message;
    return v;
  }
  if (is_brace_language(lang)) {
    if (!scan.has_top_level_content) {
      v.reason = ExecReason::grammar_violation;
      v.detail = "no top-level declaration";
      return v;
    }
    v.executable = true;
    v.reason = ExecReason::ok;
    return v;
  }
  v.executable = !text::is_blank(code);
  v.reason = ExecReason::unsupported_language_approx;
  if (!v.executable) v.detail = "empty";
  return v;
}

}  // namespace curate::code
