// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "curate/core/sample.hpp"
#include "curate/quality/verdict.hpp"

namespace curate::quality {

/// Sample in, raw judge text out. Transport problems are reported by
/// throwing; the text itself is checked against the contract by assess().
using Judge = std::function<std::string(const Sample&)>;

struct Assessment {
  QualityVerdict verdict;
  std::size_t attempts = 0;
  bool fallback = false;  // judge output never met the contract
  std::vector<std::string> warnings;
};

/// One retry on a contract violation, then a Judge Output Invalid issue so
/// triage routes the sample to Review. Any exception from the judge becomes
/// judge-unavailable.
inline Assessment assess(const Sample& s, const Judge& judge) {
  if (!judge) throw Error(ErrorCode::invalid_argument, "no judge configured");
  std::vector<std::string> warnings;
  for (std::size_t attempt = 1; attempt <= 2; ++attempt) {
    std::string raw;
    try {
      raw = judge(s);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::judge_unavailable) throw;
      throw Error(ErrorCode::judge_unavailable, "judge failed on '" + s.id + "': " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::judge_unavailable, "judge failed on '" + s.id + "': " + e.what());
    }
    try {
      return {parse_verdict(raw), attempt, false, std::move(warnings)};
    } catch (const Error& e) {
      warnings.push_back("sample '" + s.id + "' attempt " + std::to_string(attempt) + ": " + e.what());
    }
  }
  warnings.push_back("sample '" + s.id + "': judge output rejected twice, routed to review");
  auto v = QualityVerdict::fail({{std::string(kJudgeOutputInvalid), "judge output violated the verdict contract twice"}});
  return {std::move(v), 2, true, std::move(warnings)};
}

namespace detail {

inline std::optional<std::size_t> small_number(const std::string& w) {
  static const std::map<std::string, std::size_t> names = {
      {"one", 1}, {"two", 2},   {"three", 3}, {"four", 4}, {"five", 5},    {"six", 6},      {"seven", 7},
      {"eight", 8}, {"nine", 9}, {"ten", 10},  {"a single", 1}, {"single", 1}, {"twelve", 12}, {"twenty", 20}};
  if (!w.empty() && std::isdigit(static_cast<unsigned char>(w[0]))) return std::stoul(w);
  auto it = names.find(w);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

/// Strips fenced code so prose rules never count inside code.
inline std::string prose_only(std::string_view s) {
  std::string out;
  bool in_fence = false;
  for (auto line : text::split_lines(s)) {
    if (text::starts_with(text::trim(line), "```")) {
      in_fence = !in_fence;
      continue;
    }
    if (!in_fence) {
      out += line;
      out += '\n';
    }
  }
  return out;
}

/// Sentences end at a run of . ! ? followed by whitespace or end of text, or
/// at a blank line. Fragments with no letter or digit are ignored.
inline std::vector<std::string> sentences(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    bool content = false;
    for (char c : cur)
      if (std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80) content = true;
    if (content) out.emplace_back(text::trim(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '\n' && i + 1 < s.size() && s[i + 1] == '\n') {
      flush();
      continue;
    }
    cur += c;
    if (c == '.' || c == '!' || c == '?') {
      std::size_t j = i + 1;
      while (j < s.size() && (s[j] == '.' || s[j] == '!' || s[j] == '?')) cur += s[j++];
      if (j >= s.size() || text::is_space(s[j])) flush();
      i = j - 1;
    }
  }
  flush();
  return out;
}

inline std::size_t word_count(std::string_view s) {
  std::size_t n = 0;
  bool in = false;
  for (char c : s) {
    bool w = !text::is_space(c);
    if (w && !in) ++n;
    in = w;
  }
  return n;
}

inline std::size_t bullet_lines(std::string_view s) {
  static const std::regex bullet(R"(^\s*([-*+]|\d+[.)])\s+\S)");
  std::size_t n = 0;
  for (auto line : text::split_lines(s))
    if (std::regex_search(std::string(line), bullet)) ++n;
  return n;
}

enum class Bound { exact, at_most, below };

struct CountRule {
  std::string unit;  // "sentence", "word", "bullet"
  Bound bound;
  std::size_t n;
};

inline std::vector<CountRule> count_rules(const std::string& lowered) {
  static const std::regex rule(
      R"(\b(exactly|at most|no more than|fewer than|less than|under|within|in|using|with|only|give|list)\s+(\d+|a single|one|two|three|four|five|six|seven|eight|nine|ten|twelve|twenty)\s+(sentences?|words?|bullet points?|bullets?)\b)");
  std::vector<CountRule> out;
  for (std::sregex_iterator it(lowered.begin(), lowered.end(), rule), end; it != end; ++it) {
    std::string q = (*it)[1], num = (*it)[2], unit = (*it)[3];
    auto n = small_number(num);
    if (!n) continue;
    Bound b = Bound::exact;
    if (q == "at most" || q == "no more than" || q == "within") b = Bound::at_most;
    if (q == "fewer than" || q == "less than" || q == "under") b = Bound::below;
    std::string u = unit.rfind("bullet", 0) == 0 ? "bullet" : unit.rfind("word", 0) == 0 ? "word" : "sentence";
    out.push_back({u, b, *n});
  }
  return out;
}

inline bool wants_json(const std::string& lowered) {
  static const std::regex json(R"(\b(respond|reply|answer|output|return|format)\b[^.\n]{0,40}\bjson\b)");
  return std::regex_search(lowered, json);
}

/// Negation-insensitive key plus negation parity.
inline std::pair<std::string, bool> polarity_key(const std::string& sentence) {
  std::string l = text::to_lower(sentence);
  std::string expanded;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l.compare(i, 3, "n't") == 0) {
      expanded += " not";
      i += 2;
    } else if (l[i] == '\'') {
      continue;
    } else {
      expanded += l[i];
    }
  }
  std::string key;
  bool negated = false;
  for (auto w : text::words(expanded)) {
    std::string word(w);
    if (word == "cannot") word = "can", negated = !negated;
    else if (word == "not" || word == "no" || word == "never") {
      negated = !negated;
      continue;
    }
    // "ca" and "wo" are what remains of can't / won't
    if (word == "ca") word = "can";
    if (word == "wo") word = "will";
    if (!key.empty()) key += ' ';
    key += word;
  }
  return {key, negated};
}

}  // namespace detail

struct RuleJudgeOptions {
  std::size_t min_contradiction_words = 3;
};

/// Deterministic checks: blank responses, detectable format instructions,
/// and a sentence asserted both with and without a negation.
inline QualityVerdict rule_verdict(const Sample& s, const RuleJudgeOptions& opt = {}) {
  std::vector<Issue> issues;
  std::string system = text::to_lower(s.joined(Role::system));
  std::string last_user;
  bool any_assistant = false;
  for (const auto& m : s.messages) {
    if (m.role == Role::user) last_user = text::to_lower(m.content);
    if (m.role != Role::assistant) continue;
    any_assistant = true;
    if (text::is_blank(m.content)) {
      issues.push_back({std::string(kInstructionFollowing), "assistant response is empty"});
      continue;
    }
    std::string instructions = system + "\n" + last_user;
    std::string prose = detail::prose_only(m.content);
    for (const auto& r : detail::count_rules(instructions)) {
      std::size_t got = r.unit == "sentence" ? detail::sentences(prose).size()
                        : r.unit == "word"   ? detail::word_count(prose)
                                             : detail::bullet_lines(prose);
      bool ok = r.bound == detail::Bound::exact     ? got == r.n
                : r.bound == detail::Bound::at_most ? got <= r.n
                                                    : got < r.n;
      if (!ok) {
        const char* how = r.bound == detail::Bound::exact ? "exactly" : r.bound == detail::Bound::at_most ? "at most" : "fewer than";
        issues.push_back({std::string(kInstructionFollowing), "asked for " + std::string(how) + " " +
                                                                   std::to_string(r.n) + " " + r.unit +
                                                                   "(s), response has " + std::to_string(got)});
      }
    }
    if (detail::wants_json(instructions)) {
      std::string body(text::trim(m.content));
      if (text::starts_with(body, "```")) {
        auto nl = body.find('\n');
        auto close = body.rfind("```");
        body = nl != std::string::npos && close > nl ? body.substr(nl + 1, close - nl - 1) : std::string();
      }
      if (!nlohmann::json::accept(body))
        issues.push_back({std::string(kInstructionFollowing), "asked for JSON, response does not parse as JSON"});
    }
    std::map<std::string, bool> seen;
    for (const auto& sent : detail::sentences(prose)) {
      auto [key, neg] = detail::polarity_key(sent);
      if (detail::word_count(key) < opt.min_contradiction_words) continue;
      auto it = seen.find(key);
      if (it == seen.end()) {
        seen.emplace(key, neg);
      } else if (it->second != neg) {
        issues.push_back({std::string(kResponseConsistency), "response asserts and negates: \"" + sent + "\""});
        break;
      }
    }
  }
  if (!any_assistant) issues.push_back({std::string(kInstructionFollowing), "sample has no assistant response"});
  return issues.empty() ? QualityVerdict::pass() : QualityVerdict::fail(std::move(issues));
}

inline Judge rule_judge(RuleJudgeOptions opt = {}) {
  return [opt](const Sample& s) { return serialize_verdict(rule_verdict(s, opt)); };
}

}  // namespace curate::quality
