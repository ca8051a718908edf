// SPDX-License-Identifier: Apache-2.0
//
// Context-aware delimiter automaton for brace languages. Strings, character
// literals, comments and the usual language-specific literal forms are
// skipped so that delimiters inside them do not count.
#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curate/code/language.hpp"

namespace curate::code {

struct DelimiterIssue {
  std::size_t line;
  std::size_t column;
  std::string message;
  bool unterminated_literal = false;
};

struct DelimiterScan {
  std::optional<DelimiterIssue> issue;
  bool has_top_level_content = false;  // any token outside comments at depth 0
};

namespace detail {

class BraceScanner {
 public:
  BraceScanner(std::string_view src, Language lang) : s_(src), lang_(lang) {}

  DelimiterScan run() {
    DelimiterScan out;
    try {
      scan(out, 0);
      if (!stack_.empty()) {
        const auto& o = stack_.back();
        fail_at(o.line, o.column, std::string("'") + o.ch + "' was never closed");
      }
    } catch (const DelimiterIssue& issue) {
      out.issue = issue;
    }
    return out;
  }

 private:
  struct Open {
    char ch;
    std::size_t line;
    std::size_t column;
  };

  [[noreturn]] void fail_at(std::size_t line, std::size_t col, std::string msg, bool literal = false) {
    throw DelimiterIssue{line, col, std::move(msg), literal};
  }

  char at(std::size_t k = 0) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }

  void step() {
    if (s_[i_] == '\n') {
      ++line_;
      line_begin_ = i_ + 1;
    }
    ++i_;
  }

  std::size_t col() const { return i_ - line_begin_ + 1; }

  bool slash_comments() const { return lang_ != Language::sql && lang_ != Language::shell && lang_ != Language::other; }

  // Scans until end of input, or until the '}' closing a template
  // substitution when stop_depth > 0.
  void scan(DelimiterScan& out, std::size_t stop_depth) {
    while (i_ < s_.size()) {
      char c = at();
      if (slash_comments() && c == '/' && at(1) == '/') {
        while (i_ < s_.size() && at() != '\n') step();
        continue;
      }
      if (slash_comments() && c == '/' && at(1) == '*') {
        std::size_t l = line_, k = col();
        step();
        step();
        while (i_ < s_.size() && !(at() == '*' && at(1) == '/')) step();
        if (i_ >= s_.size()) fail_at(l, k, "unterminated block comment", true);
        step();
        step();
        continue;
      }
      if ((lang_ == Language::sql) && c == '-' && at(1) == '-') {
        while (i_ < s_.size() && at() != '\n') step();
        continue;
      }
      if ((lang_ == Language::shell || lang_ == Language::other) && c == '#' && (i_ == 0 || std::isspace(static_cast<unsigned char>(s_[i_ - 1])))) {
        while (i_ < s_.size() && at() != '\n') step();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        step();
        continue;
      }
      if (stack_.size() == stop_depth && stop_depth > 0 && c == '}') return;
      if (stack_.empty()) out.has_top_level_content = true;
      if (try_literal()) continue;
      if (c == '(' || c == '[' || c == '{') {
        stack_.push_back({c, line_, col()});
        step();
        continue;
      }
      if (c == ')' || c == ']' || c == '}') {
        char want = c == ')' ? '(' : c == ']' ? '[' : '{';
        if (stack_.empty()) fail_at(line_, col(), std::string("unmatched '") + c + "'");
        if (stack_.back().ch != want)
          fail_at(line_, col(), std::string("'") + c + "' does not match '" + stack_.back().ch + "'");
        stack_.pop_back();
        step();
        continue;
      }
      // digit separators (1'000'000) in C++ must not open a char literal
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(at())) || at() == '_' ||
                                  (lang_ == Language::cpp && at() == '\'' && std::isxdigit(static_cast<unsigned char>(at(1))) &&
                                   i_ > 0 && std::isxdigit(static_cast<unsigned char>(s_[i_ - 1])) && number_run())))
          step();
        continue;
      }
      step();
    }
  }

  // True when the identifier run being scanned started with a digit.
  bool number_run() const {
    std::size_t k = i_;
    while (k > 0 && (std::isalnum(static_cast<unsigned char>(s_[k - 1])) || s_[k - 1] == '_' || s_[k - 1] == '\''))
      --k;
    return k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]));
  }

  void quoted(char q, bool escapes, bool multiline) {
    std::size_t l = line_, k = col();
    step();
    while (i_ < s_.size()) {
      char c = at();
      if (escapes && c == '\\') {
        step();
        if (i_ < s_.size()) step();
        continue;
      }
      if (c == q) {
        step();
        return;
      }
      if (c == '\n' && !multiline) break;
      step();
    }
    fail_at(l, k, "unterminated literal", true);
  }

  void template_literal(DelimiterScan& out) {
    std::size_t l = line_, k = col();
    step();
    while (i_ < s_.size()) {
      char c = at();
      if (c == '\\') {
        step();
        if (i_ < s_.size()) step();
        continue;
      }
      if (c == '`') {
        step();
        return;
      }
      if (c == '$' && at(1) == '{') {
        step();
        stack_.push_back({'{', line_, col()});
        step();
        std::size_t depth = stack_.size();
        scan(out, depth);
        if (i_ >= s_.size()) fail_at(l, k, "unterminated template literal", true);
        stack_.pop_back();
        step();
        continue;
      }
      step();
    }
    fail_at(l, k, "unterminated template literal", true);
  }

  // Rust: 'a is a lifetime unless it closes as a char literal.
  bool rust_char_or_lifetime() {
    if (at(1) == '\\') {
      quoted('\'', true, false);
      return true;
    }
    // 'x' (possibly multibyte) closes within a few bytes
    for (std::size_t k = 2; k <= 5 && i_ + k < s_.size(); ++k) {
      if (s_[i_ + k] == '\'') {
        for (std::size_t m = 0; m <= k; ++m) step();
        return true;
      }
      if (static_cast<unsigned char>(s_[i_ + 1]) < 0x80) break;
    }
    step();  // lifetime tick
    return true;
  }

  bool try_literal() {
    char c = at();
    // Rust raw strings r"..." / r#"..."#, byte strings b"..."
    if (lang_ == Language::rust && (c == 'r' || (c == 'b' && at(1) == 'r')) && (i_ == 0 || !ident_before())) {
      std::size_t k = c == 'b' ? 2 : 1;
      std::size_t hashes = 0;
      while (i_ + k + hashes < s_.size() && s_[i_ + k + hashes] == '#') ++hashes;
      if (i_ + k + hashes < s_.size() && s_[i_ + k + hashes] == '"') {
        std::size_t l = line_, kcol = col();
        for (std::size_t m = 0; m < k + hashes + 1; ++m) step();
        std::string close = "\"" + std::string(hashes, '#');
        while (i_ < s_.size() && s_.substr(i_, close.size()) != close) step();
        if (i_ >= s_.size()) fail_at(l, kcol, "unterminated raw string", true);
        for (std::size_t m = 0; m < close.size(); ++m) step();
        return true;
      }
    }
    // C++ raw strings R"delim(...)delim"
    if (lang_ == Language::cpp && c == 'R' && at(1) == '"' && (i_ == 0 || !ident_before() || prefix_before())) {
      std::size_t l = line_, kcol = col();
      step();
      step();
      std::string delim;
      while (i_ < s_.size() && at() != '(' && delim.size() < 16) {
        delim += at();
        step();
      }
      std::string close = ")" + delim + "\"";
      while (i_ < s_.size() && s_.substr(i_, close.size()) != close) step();
      if (i_ >= s_.size()) fail_at(l, kcol, "unterminated raw string", true);
      for (std::size_t m = 0; m < close.size(); ++m) step();
      return true;
    }
    // C# verbatim strings @"..." with "" escapes
    if (lang_ == Language::csharp && c == '@' && at(1) == '"') {
      std::size_t l = line_, kcol = col();
      step();
      step();
      while (i_ < s_.size()) {
        if (at() == '"' && at(1) == '"') {
          step();
          step();
          continue;
        }
        if (at() == '"') break;
        step();
      }
      if (i_ >= s_.size()) fail_at(l, kcol, "unterminated verbatim string", true);
      step();
      return true;
    }
    if (c == '"') {
      if (lang_ == Language::shell || lang_ == Language::sql || lang_ == Language::other) {
        quoted('"', lang_ != Language::sql, true);
      } else if ((lang_ == Language::java || lang_ == Language::csharp) && at(1) == '"' && at(2) == '"') {
        // text blocks / raw string literals
        std::size_t l = line_, kcol = col();
        step();
        step();
        step();
        while (i_ < s_.size() && !(at() == '"' && at(1) == '"' && at(2) == '"')) step();
        if (i_ >= s_.size()) fail_at(l, kcol, "unterminated text block", true);
        step();
        step();
        step();
      } else {
        quoted('"', true, false);
      }
      return true;
    }
    if (c == '\'') {
      if (lang_ == Language::rust) return rust_char_or_lifetime();
      bool shell_like = lang_ == Language::shell || lang_ == Language::other;
      quoted('\'', lang_ != Language::sql && !shell_like, shell_like || lang_ == Language::sql);
      return true;
    }
    if (c == '`') {
      if (lang_ == Language::javascript || lang_ == Language::typescript) {
        DelimiterScan dummy;
        template_literal(dummy);
        return true;
      }
      if (lang_ == Language::go || lang_ == Language::shell || lang_ == Language::sql || lang_ == Language::other) {
        quoted('`', false, true);
        return true;
      }
    }
    return false;
  }

  bool ident_before() const {
    return i_ > 0 && (std::isalnum(static_cast<unsigned char>(s_[i_ - 1])) || s_[i_ - 1] == '_');
  }

  // u8R"..." / LR"..." style encoding prefixes.
  bool prefix_before() const {
    std::size_t k = i_;
    while (k > 0 && std::isalnum(static_cast<unsigned char>(s_[k - 1]))) --k;
    std::string_view p = s_.substr(k, i_ - k);
    return p == "u8" || p == "u" || p == "U" || p == "L";
  }

  std::string_view s_;
  Language lang_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t line_begin_ = 0;
  std::vector<Open> stack_;
};

}  // namespace detail

inline DelimiterScan scan_delimiters(std::string_view code, Language lang) {
  return detail::BraceScanner(code, lang).run();
}

}  // namespace curate::code
