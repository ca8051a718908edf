// SPDX-License-Identifier: Apache-2.0
//
// Tokenizer and recursive-descent recognizer for Python 3.10 source. It
// builds no tree; it only decides whether a module is syntactically valid and
// reports the first failure with a location and a category.
//
// Covered: the full statement grammar except `match`, the full expression
// grammar, f-string fields, bracket/indentation/tab consistency, assignment
// target rules and call-argument ordering rules.
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curate/core/text.hpp"

namespace curate::code::python {

enum class FailureKind { tokenize, delimiters, indentation, grammar };

struct SyntaxFailure {
  FailureKind kind;
  std::size_t line;    // 1-based
  std::size_t column;  // 1-based
  std::string message;
};

enum class TokenType { name, number, string, op, newline, indent, dedent, end };

struct Token {
  TokenType type;
  std::string_view text;
  std::size_t line;
  std::size_t column;
  // Strings only.
  bool bytes = false;
  bool fstring = false;
  bool raw = false;
  std::string_view body;  // between the quotes
};

inline bool is_keyword(std::string_view s) {
  static constexpr std::array<std::string_view, 35> kKeywords = {
      "False", "None",   "True",    "and",      "as",   "assert", "async",  "await",  "break",
      "class", "continue", "def",   "del",      "elif", "else",   "except", "finally", "for",
      "from",  "global", "if",      "import",   "in",   "is",     "lambda", "nonlocal", "not",
      "or",    "pass",   "raise",   "return",   "try",  "while",  "with",   "yield"};
  return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end();
}

namespace detail {

struct Failed {
  SyntaxFailure failure;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    indents_.push_back({0, 0});
    bool at_line_start = true;
    bool line_has_tokens = false;
    while (pos_ < src_.size()) {
      if (at_line_start) {
        at_line_start = false;
        if (brackets_.empty() && handle_indentation()) {
          at_line_start = true;  // blank or comment-only line consumed
          continue;
        }
      }
      char c = src_[pos_];
      if (c == '\n') {
        if (brackets_.empty() && line_has_tokens) {
          push(TokenType::newline, pos_, 1);
          line_has_tokens = false;
        }
        advance_line();
        at_line_start = true;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\f' || c == '\r') {
        ++pos_;
        continue;
      }
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '\\') {
        std::size_t next = pos_ + 1;
        if (next < src_.size() && src_[next] == '\r') ++next;
        if (next < src_.size() && src_[next] == '\n') {
          pos_ = next;
          advance_line();
          if (pos_ >= src_.size()) fail(FailureKind::tokenize, "unexpected EOF after line continuation");
          continue;
        }
        fail(FailureKind::tokenize, "unexpected character after line continuation character");
      }
      line_has_tokens = true;
      if (string_start()) {
        lex_string();
      } else if (text::is_ident_start(c)) {
        std::size_t b = pos_;
        while (pos_ < src_.size() && text::is_ident_char(src_[pos_])) ++pos_;
        push(TokenType::name, b, pos_ - b);
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number();
      } else {
        lex_operator();
      }
    }
    if (!brackets_.empty()) {
      const auto& open = brackets_.back();
      fail_at(FailureKind::delimiters, open.line, open.column, std::string("'") + open.ch + "' was never closed");
    }
    if (line_has_tokens) push(TokenType::newline, pos_, 0);
    while (indents_.size() > 1) {
      indents_.pop_back();
      push(TokenType::dedent, pos_, 0);
    }
    push(TokenType::end, pos_, 0);
    return std::move(tokens_);
  }

 private:
  struct Indent {
    std::size_t col;
    std::size_t alt;  // tabs counted as one column
  };
  struct Open {
    char ch;
    std::size_t line;
    std::size_t column;
  };

  [[noreturn]] void fail_at(FailureKind kind, std::size_t line, std::size_t col, std::string msg) {
    throw Failed{{kind, line, col, std::move(msg)}};
  }
  [[noreturn]] void fail(FailureKind kind, std::string msg) { fail_at(kind, line_, column(pos_), std::move(msg)); }

  std::size_t column(std::size_t at) const { return at - line_begin_ + 1; }

  void advance_line() {
    ++pos_;
    ++line_;
    line_begin_ = pos_;
  }

  void push(TokenType type, std::size_t at, std::size_t len) {
    Token t{type, src_.substr(std::min(at, src_.size()), len), line_, column(at), false, false, false, {}};
    tokens_.push_back(t);
  }

  // Returns true when the whole physical line was blank or a comment.
  bool handle_indentation() {
    std::size_t col = 0;
    std::size_t alt = 0;
    std::size_t p = pos_;
    while (p < src_.size()) {
      char c = src_[p];
      if (c == ' ') {
        ++col;
        ++alt;
      } else if (c == '\t') {
        col = (col / 8 + 1) * 8;
        ++alt;
      } else if (c == '\f') {
        col = alt = 0;
      } else {
        break;
      }
      ++p;
    }
    if (p >= src_.size() || src_[p] == '\n' || src_[p] == '#' || src_[p] == '\r') {
      pos_ = p;
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      if (pos_ < src_.size()) advance_line();
      return true;
    }
    pos_ = p;
    const Indent& top = indents_.back();
    if (col == top.col) {
      if (alt != top.alt) fail(FailureKind::indentation, "inconsistent use of tabs and spaces in indentation");
    } else if (col > top.col) {
      if (alt <= top.alt) fail(FailureKind::indentation, "inconsistent use of tabs and spaces in indentation");
      indents_.push_back({col, alt});
      push(TokenType::indent, pos_, 0);
    } else {
      while (indents_.size() > 1 && col < indents_.back().col) {
        indents_.pop_back();
        push(TokenType::dedent, pos_, 0);
      }
      if (col != indents_.back().col)
        fail(FailureKind::indentation, "unindent does not match any outer indentation level");
      if (alt != indents_.back().alt)
        fail(FailureKind::indentation, "inconsistent use of tabs and spaces in indentation");
    }
    return false;
  }

  // Checks for a (prefixed) string literal at pos_.
  bool string_start() const {
    std::size_t p = pos_;
    std::size_t n = 0;
    while (p + n < src_.size() && n < 2 && std::isalpha(static_cast<unsigned char>(src_[p + n]))) ++n;
    for (std::size_t len = n;; --len) {
      if (p + len < src_.size() && (src_[p + len] == '\'' || src_[p + len] == '"') && valid_prefix(src_.substr(p, len)))
        return true;
      if (len == 0) break;
    }
    return false;
  }

  static bool valid_prefix(std::string_view prefix) {
    std::string p = text::to_lower(prefix);
    return p.empty() || p == "r" || p == "u" || p == "b" || p == "f" || p == "br" || p == "rb" || p == "fr" ||
           p == "rf";
  }

  void lex_string() {
    std::size_t b = pos_;
    std::size_t start_line = line_;
    std::size_t start_col = column(pos_);
    bool bytes = false, fstr = false, raw = false;
    while (src_[pos_] != '\'' && src_[pos_] != '"') {
      char c = static_cast<char>(std::tolower(static_cast<unsigned char>(src_[pos_])));
      bytes |= c == 'b';
      fstr |= c == 'f';
      raw |= c == 'r';
      ++pos_;
    }
    char q = src_[pos_];
    bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == q && src_[pos_ + 2] == q;
    std::size_t qlen = triple ? 3 : 1;
    pos_ += qlen;
    std::size_t body_begin = pos_;
    std::size_t body_end = 0;
    for (;;) {
      if (pos_ >= src_.size()) {
        fail_at(FailureKind::tokenize, start_line, start_col,
                triple ? "unterminated triple-quoted string literal" : "unterminated string literal");
      }
      char c = src_[pos_];
      if (c == '\\') {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') {
          pos_ += 1;
          advance_line();
        } else {
          pos_ += 2;
        }
        continue;
      }
      if (c == '\n') {
        if (!triple) fail_at(FailureKind::tokenize, start_line, start_col, "unterminated string literal");
        advance_line();
        continue;
      }
      if (c == q && (!triple || (pos_ + 2 < src_.size() && src_[pos_ + 1] == q && src_[pos_ + 2] == q))) {
        body_end = pos_;
        pos_ += qlen;
        break;
      }
      ++pos_;
    }
    Token t{TokenType::string, src_.substr(b, pos_ - b), start_line, start_col, false, false, false, {}};
    t.bytes = bytes;
    t.fstring = fstr;
    t.raw = raw;
    t.body = src_.substr(body_begin, body_end - body_begin);
    if (!raw) check_escapes(t, start_line, start_col);
    if (bytes) {
      for (unsigned char ch : t.body)
        if (ch >= 0x80)
          fail_at(FailureKind::tokenize, start_line, start_col, "bytes can only contain ASCII literal characters");
    }
    tokens_.push_back(t);
  }

  // Truncated \x, \u, \U and malformed \N escapes are compile-time errors.
  void check_escapes(const Token& t, std::size_t line, std::size_t col) {
    std::string_view b = t.body;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      if (b[i] != '\\') continue;
      char e = b[i + 1];
      std::size_t need = e == 'x' ? 2 : (!t.bytes && e == 'u') ? 4 : (!t.bytes && e == 'U') ? 8 : 0;
      if (need > 0) {
        for (std::size_t k = 0; k < need; ++k)
          if (i + 2 + k >= b.size() || !std::isxdigit(static_cast<unsigned char>(b[i + 2 + k])))
            fail_at(FailureKind::tokenize, line, col, "truncated \\" + std::string(1, e) + " escape");
      } else if (!t.bytes && e == 'N') {
        std::size_t close = b.find('}', i + 2);
        if (i + 2 >= b.size() || b[i + 2] != '{' || close == std::string_view::npos || close == i + 3)
          fail_at(FailureKind::tokenize, line, col, "malformed \\N character escape");
      }
      ++i;
    }
  }

  bool digit_in(char c, int base) const {
    if (base == 16) return std::isxdigit(static_cast<unsigned char>(c)) != 0;
    if (base == 8) return c >= '0' && c <= '7';
    if (base == 2) return c == '0' || c == '1';
    return c >= '0' && c <= '9';
  }

  // digits with single underscores between them; returns false if none read
  bool read_digits(int base, const char* what) {
    if (pos_ >= src_.size() || !digit_in(src_[pos_], base)) return false;
    while (pos_ < src_.size()) {
      if (digit_in(src_[pos_], base)) {
        ++pos_;
      } else if (src_[pos_] == '_') {
        ++pos_;
        if (pos_ >= src_.size() || !digit_in(src_[pos_], base)) fail(FailureKind::tokenize, std::string("invalid ") + what);
      } else {
        break;
      }
    }
    return true;
  }

  // Python lets a number run straight into a handful of keywords ("1if x").
  void verify_end_of_number(const char* what) {
    if (pos_ >= src_.size() || !text::is_ident_char(src_[pos_])) return;
    static constexpr std::array<std::string_view, 8> kAllowed = {"and", "else", "for", "if", "in", "is", "not", "or"};
    for (auto kw : kAllowed)
      if (src_.substr(pos_, kw.size()) == kw) return;
    fail(FailureKind::tokenize, std::string("invalid ") + what);
  }

  void lex_number() {
    std::size_t b = pos_;
    if (src_[pos_] == '0' && pos_ + 1 < src_.size() &&
        std::string_view("xXoObB").find(src_[pos_ + 1]) != std::string_view::npos) {
      char k = static_cast<char>(std::tolower(static_cast<unsigned char>(src_[pos_ + 1])));
      int base = k == 'x' ? 16 : k == 'o' ? 8 : 2;
      const char* what = k == 'x' ? "hexadecimal literal" : k == 'o' ? "octal literal" : "binary literal";
      pos_ += 2;
      if (pos_ < src_.size() && src_[pos_] == '_') ++pos_;
      if (!read_digits(base, what)) fail(FailureKind::tokenize, std::string("invalid ") + what);
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        fail(FailureKind::tokenize, std::string("invalid digit in ") + what);
      verify_end_of_number(what);
      push(TokenType::number, b, pos_ - b);
      return;
    }
    bool is_float = false;
    if (src_[pos_] != '.') {
      std::size_t digits_begin = pos_;
      read_digits(10, "decimal literal");
      std::string_view int_part = src_.substr(digits_begin, pos_ - digits_begin);
      bool leading_zero = int_part.size() > 1 && int_part[0] == '0';
      if (leading_zero) {
        bool all_zero = std::all_of(int_part.begin(), int_part.end(), [](char c) { return c == '0' || c == '_'; });
        bool continues_float = pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E' ||
                                                      src_[pos_] == 'j' || src_[pos_] == 'J');
        if (!all_zero && !continues_float)
          fail(FailureKind::tokenize, "leading zeros in decimal integer literals are not permitted");
      }
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      is_float = true;
      ++pos_;
      read_digits(10, "decimal literal");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (!read_digits(10, "decimal literal")) {
        pos_ = save;
        verify_end_of_number("decimal literal");
        push(TokenType::number, b, pos_ - b);
        return;
      }
      is_float = true;
    }
    (void)is_float;
    if (pos_ < src_.size() && (src_[pos_] == 'j' || src_[pos_] == 'J')) ++pos_;
    verify_end_of_number("decimal literal");
    push(TokenType::number, b, pos_ - b);
  }

  void lex_operator() {
    static constexpr std::array<std::string_view, 23> kThree = {"**=", "//=", ">>=", "<<=", "..."};
    static constexpr std::array<std::string_view, 23> kTwo = {"->", ":=", "**", "//", ">>", "<<", "<=", ">=",
                                                              "==", "!=", "+=", "-=", "*=", "/=", "%=", "&=",
                                                              "|=", "^=", "@="};
    for (auto op : kThree) {
      if (!op.empty() && src_.substr(pos_, 3) == op) {
        push(TokenType::op, pos_, 3);
        pos_ += 3;
        return;
      }
    }
    for (auto op : kTwo) {
      if (!op.empty() && src_.substr(pos_, 2) == op) {
        push(TokenType::op, pos_, 2);
        pos_ += 2;
        return;
      }
    }
    char c = src_[pos_];
    if (std::string_view("+-*/%@&|^~<>,:.;=").find(c) != std::string_view::npos) {
      push(TokenType::op, pos_, 1);
      ++pos_;
      return;
    }
    if (c == '(' || c == '[' || c == '{') {
      brackets_.push_back({c, line_, column(pos_)});
      push(TokenType::op, pos_, 1);
      ++pos_;
      return;
    }
    if (c == ')' || c == ']' || c == '}') {
      char want = c == ')' ? '(' : c == ']' ? '[' : '{';
      if (brackets_.empty()) fail(FailureKind::delimiters, std::string("unmatched '") + c + "'");
      if (brackets_.back().ch != want)
        fail(FailureKind::delimiters, std::string("closing parenthesis '") + c + "' does not match opening '" +
                                          brackets_.back().ch + "'");
      brackets_.pop_back();
      push(TokenType::op, pos_, 1);
      ++pos_;
      return;
    }
    fail(FailureKind::tokenize, std::string("invalid character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_begin_ = 0;
  std::vector<Token> tokens_;
  std::vector<Indent> indents_;
  std::vector<Open> brackets_;
};

enum class ExprKind {
  name,
  constant,  // True / False / None
  literal,   // numbers, strings, ellipsis
  attribute,
  subscript,
  call,
  starred,
  tuple,
  list,
  other,
};

struct Expr {
  Expr() = default;
  explicit Expr(ExprKind k) : kind(k) {}

  ExprKind kind = ExprKind::other;
  bool parenthesized = false;
  std::vector<Expr> elts;  // tuple / list elements, or the operand of starred
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  void parse_module() {
    while (!at(TokenType::end)) statement();
  }

  // Parses a whole token stream as a single parenthesized expression.
  void parse_expression_only() {
    star_expressions();
    if (at(TokenType::newline)) advance();
    if (!at(TokenType::end)) error("invalid syntax");
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(TokenType t) const { return peek().type == t; }
  bool at_op(std::string_view s) const { return peek().type == TokenType::op && peek().text == s; }
  bool at_kw(std::string_view s) const { return peek().type == TokenType::name && peek().text == s; }
  bool at_name() const { return peek().type == TokenType::name && !is_keyword(peek().text); }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void error(std::string msg, FailureKind kind = FailureKind::grammar) const {
    const Token& t = peek();
    throw Failed{{kind, t.line, t.column, std::move(msg)}};
  }
  [[noreturn]] void error_at(const Token& t, std::string msg) const {
    throw Failed{{FailureKind::grammar, t.line, t.column, std::move(msg)}};
  }

  void expect_op(std::string_view s) {
    if (!at_op(s)) error("expected '" + std::string(s) + "'");
    advance();
  }
  void expect_kw(std::string_view s) {
    if (!at_kw(s)) error("expected '" + std::string(s) + "'");
    advance();
  }
  void expect_name() {
    if (!at_name()) error("expected a name");
    advance();
  }
  void expect_newline() {
    if (!at(TokenType::newline)) error("invalid syntax");
    advance();
  }

  // ---- statements ----------------------------------------------------------

  void statement() {
    if (at(TokenType::indent)) error("unexpected indent", FailureKind::indentation);
    if (at(TokenType::dedent)) error("unexpected unindent", FailureKind::indentation);
    if (compound_statement()) return;
    simple_statements();
  }

  void simple_statements() {
    simple_statement();
    while (at_op(";")) {
      advance();
      if (at(TokenType::newline)) break;
      simple_statement();
    }
    expect_newline();
  }

  void block() {
    if (at(TokenType::newline)) {
      advance();
      if (!at(TokenType::indent)) error("expected an indented block", FailureKind::indentation);
      advance();
      do {
        statement();
      } while (!at(TokenType::dedent) && !at(TokenType::end));
      if (at(TokenType::dedent)) advance();
      return;
    }
    if (at(TokenType::end)) error("expected an indented block", FailureKind::indentation);
    simple_statements();
  }

  bool compound_statement() {
    if (at_op("@")) {
      while (at_op("@")) {
        advance();
        named_expression();
        expect_newline();
      }
      if (at_kw("def")) {
        function_def();
      } else if (at_kw("class")) {
        class_def();
      } else if (at_kw("async") && peek(1).text == "def") {
        advance();
        function_def();
      } else {
        error("invalid syntax");
      }
      return true;
    }
    if (at_kw("def")) return function_def(), true;
    if (at_kw("class")) return class_def(), true;
    if (at_kw("if")) return if_statement(), true;
    if (at_kw("while")) return while_statement(), true;
    if (at_kw("for")) return for_statement(), true;
    if (at_kw("with")) return with_statement(), true;
    if (at_kw("try")) return try_statement(), true;
    if (at_kw("async")) {
      const Token& next = peek(1);
      if (next.type == TokenType::name && (next.text == "def" || next.text == "for" || next.text == "with")) {
        advance();
        if (at_kw("def")) function_def();
        else if (at_kw("for")) for_statement();
        else with_statement();
        return true;
      }
      error("invalid syntax");
    }
    return false;
  }

  void function_def() {
    expect_kw("def");
    expect_name();
    expect_op("(");
    if (!at_op(")")) parameters(true, ")");
    expect_op(")");
    if (at_op("->")) {
      advance();
      expression();
    }
    expect_op(":");
    block();
  }

  // Shared by def and lambda. Enforces marker placement and default ordering.
  void parameters(bool annotations, std::string_view closer) {
    bool seen_default = false;
    bool seen_slash = false;
    bool seen_star = false;
    bool seen_kwargs = false;
    std::size_t positional = 0;
    for (;;) {
      if (seen_kwargs) error("arguments cannot follow var-keyword argument");
      if (at_op("/")) {
        if (seen_slash || seen_star || positional == 0) error("invalid syntax");
        advance();
        seen_slash = true;
      } else if (at_op("*")) {
        if (seen_star) error("* argument may appear only once");
        advance();
        seen_star = true;
        if (at_name()) {
          advance();
          if (annotations && at_op(":")) {
            advance();
            expression();
          }
        } else {
          // bare '*' must be followed by a keyword-only parameter
          if (!at_op(",")) error("named arguments must follow bare *");
          advance();
          if (!at_name()) error("named arguments must follow bare *");
          continue;
        }
      } else if (at_op("**")) {
        advance();
        expect_name();
        if (annotations && at_op(":")) {
          advance();
          expression();
        }
        seen_kwargs = true;
      } else if (at_name()) {
        advance();
        if (annotations && at_op(":")) {
          advance();
          expression();
        }
        if (at_op("=")) {
          advance();
          expression();
          if (!seen_star) seen_default = true;
        } else if (seen_default && !seen_star) {
          error("non-default argument follows default argument");
        }
        if (!seen_star) ++positional;
      } else {
        error("invalid syntax");
      }
      if (!at_op(",")) break;
      advance();
      if (at_op(closer)) break;
    }
  }

  void class_def() {
    expect_kw("class");
    expect_name();
    if (at_op("(")) {
      advance();
      if (!at_op(")")) arguments();
      expect_op(")");
    }
    expect_op(":");
    block();
  }

  void if_statement() {
    expect_kw("if");
    named_expression();
    expect_op(":");
    block();
    while (at_kw("elif")) {
      advance();
      named_expression();
      expect_op(":");
      block();
    }
    if (at_kw("else")) {
      advance();
      expect_op(":");
      block();
    }
  }

  void while_statement() {
    expect_kw("while");
    named_expression();
    expect_op(":");
    block();
    if (at_kw("else")) {
      advance();
      expect_op(":");
      block();
    }
  }

  void for_statement() {
    expect_kw("for");
    Expr target = star_targets();
    check_assignable(target, "assign to");
    expect_kw("in");
    star_expressions();
    expect_op(":");
    block();
    if (at_kw("else")) {
      advance();
      expect_op(":");
      block();
    }
  }

  void with_item() {
    expression();
    if (at_kw("as")) {
      advance();
      Expr target = star_target();
      check_assignable(target, "assign to");
    }
  }

  void with_statement() {
    expect_kw("with");
    if (at_op("(")) {
      std::size_t save = pos_;
      try {
        advance();
        with_item();
        while (at_op(",")) {
          advance();
          if (at_op(")")) break;
          with_item();
        }
        expect_op(")");
        expect_op(":");
        block();
        return;
      } catch (const Failed&) {
        pos_ = save;
      }
    }
    with_item();
    while (at_op(",")) {
      advance();
      with_item();
    }
    expect_op(":");
    block();
  }

  void try_statement() {
    expect_kw("try");
    expect_op(":");
    block();
    bool handlers = false;
    while (at_kw("except")) {
      handlers = true;
      advance();
      if (!at_op(":")) {
        expression();
        if (at_op(",")) {
          // `except A, B:` is Python 2 syntax; a tuple needs parentheses.
          error("multiple exception types must be parenthesized");
        }
        if (at_kw("as")) {
          advance();
          expect_name();
        }
      }
      expect_op(":");
      block();
    }
    if (handlers && at_kw("else")) {
      advance();
      expect_op(":");
      block();
    }
    if (at_kw("finally")) {
      advance();
      expect_op(":");
      block();
      return;
    }
    if (!handlers) error("expected 'except' or 'finally' block");
  }

  void simple_statement() {
    if (at_kw("pass") || at_kw("break") || at_kw("continue")) {
      advance();
      return;
    }
    if (at_kw("return")) {
      advance();
      if (!at_statement_end()) star_expressions();
      return;
    }
    if (at_kw("raise")) {
      advance();
      if (!at_statement_end()) {
        expression();
        if (at_kw("from")) {
          advance();
          expression();
        }
      }
      return;
    }
    if (at_kw("global") || at_kw("nonlocal")) {
      advance();
      expect_name();
      while (at_op(",")) {
        advance();
        expect_name();
      }
      return;
    }
    if (at_kw("del")) {
      advance();
      del_targets();
      return;
    }
    if (at_kw("assert")) {
      advance();
      expression();
      if (at_op(",")) {
        advance();
        expression();
      }
      return;
    }
    if (at_kw("import")) {
      advance();
      dotted_as_name();
      while (at_op(",")) {
        advance();
        dotted_as_name();
      }
      return;
    }
    if (at_kw("from")) {
      import_from();
      return;
    }
    expression_statement();
  }

  bool at_statement_end() const { return at(TokenType::newline) || at_op(";") || at(TokenType::end); }

  void dotted_name() {
    expect_name();
    while (at_op(".")) {
      advance();
      expect_name();
    }
  }

  void dotted_as_name() {
    dotted_name();
    if (at_kw("as")) {
      advance();
      expect_name();
    }
  }

  void import_from() {
    expect_kw("from");
    bool dots = false;
    while (at_op(".") || at_op("...")) {
      advance();
      dots = true;
    }
    if (!at_kw("import")) {
      dotted_name();
    } else if (!dots) {
      error("invalid syntax");
    }
    expect_kw("import");
    if (at_op("*")) {
      advance();
      return;
    }
    bool paren = at_op("(");
    if (paren) advance();
    for (;;) {
      expect_name();
      if (at_kw("as")) {
        advance();
        expect_name();
      }
      if (!at_op(",")) break;
      advance();
      if (paren && at_op(")")) break;
      if (!paren && at_statement_end()) error("trailing comma not allowed without surrounding parentheses");
    }
    if (paren) expect_op(")");
  }

  void del_targets() {
    for (;;) {
      Expr t = bitwise_or_or_star();
      check_deletable(t);
      if (!at_op(",")) break;
      advance();
      if (at_statement_end()) break;
    }
  }

  Expr bitwise_or_or_star() {
    if (at_op("*")) {
      advance();
      Expr inner = bitwise_or();
      Expr e{ExprKind::starred};
      e.elts.push_back(std::move(inner));
      return e;
    }
    return bitwise_or();
  }

  static bool is_augassign(const Token& t) {
    static constexpr std::array<std::string_view, 13> kOps = {"+=", "-=",  "*=",  "/=", "//=", "%=", "@=",
                                                               "&=", "|=",  "^=",  ">>=", "<<=", "**="};
    return t.type == TokenType::op && std::find(kOps.begin(), kOps.end(), t.text) != kOps.end();
  }

  Expr rhs() {
    if (at_kw("yield")) return yield_expression();
    return star_expressions();
  }

  void expression_statement() {
    const Token& first_tok = peek();
    Expr first = at_kw("yield") ? yield_expression() : star_expressions();
    if (at_op(":")) {
      // annotated assignment: single target only
      if (first.kind == ExprKind::tuple && !first.parenthesized)
        error_at(first_tok, "only single target (not tuple) can be annotated");
      if (first.kind != ExprKind::name && first.kind != ExprKind::attribute && first.kind != ExprKind::subscript)
        error_at(first_tok, "illegal target for annotation");
      advance();
      expression();
      if (at_op("=")) {
        advance();
        rhs();
      }
      return;
    }
    if (is_augassign(peek())) {
      if (first.kind != ExprKind::name && first.kind != ExprKind::attribute && first.kind != ExprKind::subscript)
        error_at(first_tok, "illegal expression for augmented assignment");
      advance();
      rhs();
      return;
    }
    Expr current = std::move(first);
    const Token* current_tok = &first_tok;
    while (at_op("=")) {
      check_assignable(current, "assign to", current_tok);
      advance();
      current_tok = &peek();
      current = rhs();
    }
  }

  void check_assignable(const Expr& e, const char* verb, const Token* where = nullptr) const {
    const char* what = "expression";
    switch (e.kind) {
      case ExprKind::name:
      case ExprKind::attribute:
      case ExprKind::subscript: return;
      case ExprKind::starred: check_assignable(e.elts.front(), verb, where); return;
      case ExprKind::tuple:
      case ExprKind::list:
        for (const auto& el : e.elts) check_assignable(el, verb, where);
        return;
      case ExprKind::constant: what = "keyword constant"; break;
      case ExprKind::literal: what = "literal"; break;
      case ExprKind::call: what = "function call"; break;
      case ExprKind::other: break;
    }
    std::string msg = std::string("cannot ") + verb + " " + what;
    if (where) error_at(*where, msg);
    error(msg);
  }

  void check_deletable(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::name:
      case ExprKind::attribute:
      case ExprKind::subscript: return;
      case ExprKind::tuple:
      case ExprKind::list:
        for (const auto& el : e.elts) check_deletable(el);
        return;
      case ExprKind::starred: error("cannot delete starred");
      default: error("cannot delete expression");
    }
  }

  // ---- targets ---------------------------------------------------------------

  // Targets are parsed as expressions and validated afterwards.
  Expr star_target() {
    if (at_op("*")) {
      advance();
      Expr inner = star_target();
      Expr e{ExprKind::starred};
      e.elts.push_back(std::move(inner));
      return e;
    }
    return target_primary();
  }

  Expr target_primary() { return primary(); }

  Expr star_targets() {
    Expr first = star_target();
    if (!at_op(",")) return first;
    Expr tuple{ExprKind::tuple};
    tuple.elts.push_back(std::move(first));
    while (at_op(",")) {
      advance();
      if (at_kw("in") || at_op("=") || at_op(":")) break;
      tuple.elts.push_back(star_target());
    }
    return tuple;
  }

  // ---- expressions -----------------------------------------------------------

  Expr star_expressions() {
    Expr first = star_expression();
    if (!at_op(",")) return first;
    Expr tuple{ExprKind::tuple};
    tuple.elts.push_back(std::move(first));
    while (at_op(",")) {
      advance();
      if (!starts_expression()) break;
      tuple.elts.push_back(star_expression());
    }
    return tuple;
  }

  bool starts_expression() const {
    const Token& t = peek();
    if (t.type == TokenType::name) {
      if (!is_keyword(t.text)) return true;
      return t.text == "True" || t.text == "False" || t.text == "None" || t.text == "not" || t.text == "lambda" ||
             t.text == "await";
    }
    if (t.type == TokenType::number || t.type == TokenType::string) return true;
    if (t.type == TokenType::op)
      return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" || t.text == "+" || t.text == "~" ||
             t.text == "*" || t.text == "...";
    return false;
  }

  Expr star_expression() {
    if (at_op("*")) {
      advance();
      Expr inner = bitwise_or();
      Expr e{ExprKind::starred};
      e.elts.push_back(std::move(inner));
      return e;
    }
    return expression();
  }

  Expr star_named_expression() {
    if (at_op("*")) {
      advance();
      Expr inner = bitwise_or();
      Expr e{ExprKind::starred};
      e.elts.push_back(std::move(inner));
      return e;
    }
    return named_expression();
  }

  Expr named_expression() {
    if (at_name() && peek(1).type == TokenType::op && peek(1).text == ":=") {
      advance();
      advance();
      expression();
      return Expr{ExprKind::other};
    }
    return expression();
  }

  Expr expression() {
    if (at_kw("lambda")) return lambda_expression();
    Expr e = disjunction();
    if (at_kw("if")) {
      advance();
      disjunction();
      if (!at_kw("else")) error("expected 'else' after 'if' expression");
      advance();
      expression();
      return Expr{ExprKind::other};
    }
    return e;
  }

  Expr lambda_expression() {
    expect_kw("lambda");
    if (!at_op(":")) parameters(false, ":");
    expect_op(":");
    expression();
    return Expr{ExprKind::other};
  }

  Expr disjunction() {
    Expr e = conjunction();
    while (at_kw("or")) {
      advance();
      conjunction();
      e = Expr{ExprKind::other};
    }
    return e;
  }

  Expr conjunction() {
    Expr e = inversion();
    while (at_kw("and")) {
      advance();
      inversion();
      e = Expr{ExprKind::other};
    }
    return e;
  }

  Expr inversion() {
    if (at_kw("not")) {
      advance();
      inversion();
      return Expr{ExprKind::other};
    }
    return comparison();
  }

  bool at_compare_op() const {
    const Token& t = peek();
    if (t.type == TokenType::op)
      return t.text == "==" || t.text == "!=" || t.text == "<" || t.text == ">" || t.text == "<=" || t.text == ">=";
    if (t.type == TokenType::name) {
      if (t.text == "in" || t.text == "is") return true;
      if (t.text == "not") return peek(1).type == TokenType::name && peek(1).text == "in";
    }
    return false;
  }

  Expr comparison() {
    Expr e = bitwise_or();
    while (at_compare_op()) {
      if (at_kw("not")) {
        advance();
        advance();
      } else if (at_kw("is")) {
        advance();
        if (at_kw("not")) advance();
      } else {
        advance();
      }
      bitwise_or();
      e = Expr{ExprKind::other};
    }
    return e;
  }

  template <class Next>
  Expr binary(std::initializer_list<std::string_view> ops, Next next) {
    Expr e = (this->*next)();
    for (;;) {
      bool matched = false;
      for (auto op : ops)
        if (at_op(op)) matched = true;
      if (!matched) return e;
      advance();
      (this->*next)();
      e = Expr{ExprKind::other};
    }
  }

  Expr bitwise_or() { return binary({"|"}, &Parser::bitwise_xor); }
  Expr bitwise_xor() { return binary({"^"}, &Parser::bitwise_and); }
  Expr bitwise_and() { return binary({"&"}, &Parser::shift_expr); }
  Expr shift_expr() { return binary({"<<", ">>"}, &Parser::sum); }
  Expr sum() { return binary({"+", "-"}, &Parser::term); }
  Expr term() { return binary({"*", "/", "//", "%", "@"}, &Parser::factor); }

  Expr factor() {
    if (at_op("+") || at_op("-") || at_op("~")) {
      advance();
      factor();
      return Expr{ExprKind::other};
    }
    return power();
  }

  Expr power() {
    Expr e;
    if (at_kw("await")) {
      advance();
      primary();
      e = Expr{ExprKind::other};
    } else {
      e = primary();
    }
    if (at_op("**")) {
      advance();
      factor();
      return Expr{ExprKind::other};
    }
    return e;
  }

  Expr primary() {
    Expr e = atom();
    for (;;) {
      if (at_op(".")) {
        advance();
        expect_name();
        e = Expr{ExprKind::attribute};
      } else if (at_op("(")) {
        advance();
        if (!at_op(")")) arguments();
        expect_op(")");
        e = Expr{ExprKind::call};
      } else if (at_op("[")) {
        advance();
        slices();
        expect_op("]");
        e = Expr{ExprKind::subscript};
      } else {
        return e;
      }
    }
  }

  void slices() {
    for (;;) {
      slice();
      if (!at_op(",")) return;
      advance();
      if (at_op("]")) return;
    }
  }

  void slice() {
    if (at_op("*")) error("invalid syntax");
    if (!at_op(":")) named_expression();
    if (!at_op(":")) return;
    advance();
    if (!at_op(":") && !at_op("]") && !at_op(",")) expression();
    if (at_op(":")) {
      advance();
      if (!at_op("]") && !at_op(",")) expression();
    }
  }

  void arguments() {
    bool seen_keyword = false;
    bool seen_kwunpack = false;
    std::size_t count = 0;
    bool saw_bare_genexp = false;
    for (;;) {
      ++count;
      if (at_op("**")) {
        advance();
        expression();
        seen_kwunpack = true;
      } else if (at_op("*")) {
        if (seen_kwunpack) error("iterable argument unpacking follows keyword argument unpacking");
        advance();
        expression();
      } else if (at_name() && peek(1).type == TokenType::op && peek(1).text == "=") {
        advance();
        advance();
        expression();
        seen_keyword = true;
      } else {
        if (seen_kwunpack) error("positional argument follows keyword argument unpacking");
        if (seen_keyword) error("positional argument follows keyword argument");
        named_expression();
        if (at_kw("for") || at_kw("async")) {
          comprehension_clauses();
          saw_bare_genexp = true;
        }
      }
      if (!at_op(",")) break;
      advance();
      if (at_op(")")) break;
    }
    if (saw_bare_genexp && count > 1) error("Generator expression must be parenthesized");
  }

  void comprehension_clauses() {
    while (at_kw("for") || at_kw("async")) {
      if (at_kw("async")) advance();
      expect_kw("for");
      Expr target = star_targets();
      check_assignable(target, "assign to");
      expect_kw("in");
      disjunction();
      while (at_kw("if")) {
        advance();
        disjunction();
      }
    }
  }

  Expr yield_expression() {
    expect_kw("yield");
    if (at_kw("from")) {
      advance();
      expression();
    } else if (starts_expression()) {
      star_expressions();
    }
    return Expr{ExprKind::other};
  }

  Expr atom() {
    const Token& t = peek();
    switch (t.type) {
      case TokenType::name:
        if (t.text == "True" || t.text == "False" || t.text == "None") {
          advance();
          return Expr{ExprKind::constant};
        }
        if (is_keyword(t.text)) error("invalid syntax");
        advance();
        return Expr{ExprKind::name};
      case TokenType::number: advance(); return Expr{ExprKind::literal};
      case TokenType::string: strings(); return Expr{ExprKind::literal};
      case TokenType::op:
        if (t.text == "...") {
          advance();
          return Expr{ExprKind::literal};
        }
        if (t.text == "(") return paren_atom();
        if (t.text == "[") return list_atom();
        if (t.text == "{") return brace_atom();
        error("invalid syntax");
      case TokenType::newline:
      case TokenType::end: error("invalid syntax");
      case TokenType::indent: error("unexpected indent", FailureKind::indentation);
      case TokenType::dedent: error("invalid syntax");
    }
    error("invalid syntax");
  }

  void strings() {
    bool any_bytes = false;
    bool any_text = false;
    while (at(TokenType::string)) {
      const Token& s = advance();
      (s.bytes ? any_bytes : any_text) = true;
      if (s.fstring) check_fstring(s);
    }
    if (any_bytes && any_text) error("cannot mix bytes and nonbytes literals");
  }

  Expr paren_atom() {
    expect_op("(");
    if (at_op(")")) {
      advance();
      Expr e{ExprKind::tuple};
      e.parenthesized = true;
      return e;
    }
    if (at_kw("yield")) {
      yield_expression();
      expect_op(")");
      return Expr{ExprKind::other};
    }
    Expr first = star_named_expression();
    if (at_kw("for") || at_kw("async")) {
      comprehension_clauses();
      expect_op(")");
      return Expr{ExprKind::other};
    }
    if (at_op(")")) {
      if (first.kind == ExprKind::starred) error("cannot use starred expression here");
      advance();
      first.parenthesized = true;
      return first;
    }
    Expr tuple{ExprKind::tuple};
    tuple.parenthesized = true;
    tuple.elts.push_back(std::move(first));
    while (at_op(",")) {
      advance();
      if (at_op(")")) break;
      tuple.elts.push_back(star_named_expression());
    }
    expect_op(")");
    return tuple;
  }

  Expr list_atom() {
    expect_op("[");
    Expr list{ExprKind::list};
    if (at_op("]")) {
      advance();
      return list;
    }
    list.elts.push_back(star_named_expression());
    if (at_kw("for") || at_kw("async")) {
      comprehension_clauses();
      expect_op("]");
      return Expr{ExprKind::other};
    }
    while (at_op(",")) {
      advance();
      if (at_op("]")) break;
      list.elts.push_back(star_named_expression());
    }
    expect_op("]");
    return list;
  }

  Expr brace_atom() {
    expect_op("{");
    if (at_op("}")) {
      advance();
      return Expr{ExprKind::other};
    }
    bool dict = false;
    if (at_op("**")) {
      advance();
      bitwise_or();
      dict = true;
    } else {
      Expr first = star_named_expression();
      if (at_op(":") && first.kind != ExprKind::starred) {
        advance();
        expression();
        dict = true;
      }
    }
    if (at_kw("for") || at_kw("async")) {
      comprehension_clauses();
      expect_op("}");
      return Expr{ExprKind::other};
    }
    while (at_op(",")) {
      advance();
      if (at_op("}")) break;
      if (dict) {
        if (at_op("**")) {
          advance();
          bitwise_or();
        } else {
          expression();
          expect_op(":");
          expression();
        }
      } else {
        star_named_expression();
      }
    }
    expect_op("}");
    return Expr{ExprKind::other};
  }

  // ---- f-strings -------------------------------------------------------------

  void check_fstring(const Token& tok) const {
    std::string_view body = tok.body;
    std::size_t i = 0;
    check_fstring_part(tok, body, i, false);
  }

  // Walks literal text and replacement fields until the end of `body` or, when
  // `in_spec`, until the '}' that closes the enclosing field.
  void check_fstring_part(const Token& tok, std::string_view body, std::size_t& i, bool in_spec) const {
    while (i < body.size()) {
      char c = body[i];
      if (c == '{') {
        if (!in_spec && i + 1 < body.size() && body[i + 1] == '{') {
          i += 2;
          continue;
        }
        ++i;
        check_fstring_field(tok, body, i);
        continue;
      }
      if (c == '}') {
        if (in_spec) return;
        if (i + 1 < body.size() && body[i + 1] == '}') {
          i += 2;
          continue;
        }
        error_at(tok, "f-string: single '}' is not allowed");
      }
      if (c == '\\' && !tok.raw) {
        // an escaped brace still opens or closes a field
        bool brace_next = i + 1 < body.size() && (body[i + 1] == '{' || body[i + 1] == '}');
        i += brace_next ? 1 : 2;
        continue;
      }
      ++i;
    }
  }

  void check_fstring_field(const Token& tok, std::string_view body, std::size_t& i) const {
    std::size_t begin = i;
    int depth = 0;
    char quote = 0;
    for (; i < body.size(); ++i) {
      char c = body[i];
      if (c == '\\') error_at(tok, "f-string expression part cannot include a backslash");
      if (quote) {
        if (c == quote) quote = 0;
        continue;
      }
      if (c == '\'' || c == '"') {
        quote = c;
        continue;
      }
      if (c == '#') error_at(tok, "f-string expression part cannot include '#'");
      if (c == '(' || c == '[' || c == '{') {
        ++depth;
        continue;
      }
      if (depth > 0 && (c == ')' || c == ']' || c == '}')) {
        --depth;
        continue;
      }
      if (depth == 0) {
        if (c == '}' || c == ':') break;
        if (c == '!' && !(i + 1 < body.size() && body[i + 1] == '=')) break;
      }
    }
    if (i >= body.size()) error_at(tok, "f-string: expecting '}'");
    std::string_view expr = body.substr(begin, i - begin);
    // self-documenting `{x=}`
    std::string_view trimmed = text::trim(expr);
    if (!trimmed.empty() && trimmed.back() == '=') {
      char before = trimmed.size() >= 2 ? trimmed[trimmed.size() - 2] : ' ';
      if (before != '=' && before != '!' && before != '<' && before != '>') {
        trimmed.remove_suffix(1);
      }
    }
    if (text::trim(trimmed).empty()) error_at(tok, "f-string: empty expression not allowed");
    check_embedded_expression(tok, trimmed);
    if (body[i] == '!') {
      ++i;
      if (i >= body.size() || (body[i] != 's' && body[i] != 'r' && body[i] != 'a'))
        error_at(tok, "f-string: invalid conversion character: expected 's', 'r', or 'a'");
      ++i;
      if (i >= body.size()) error_at(tok, "f-string: expecting '}'");
    }
    if (body[i] == ':') {
      ++i;
      check_fstring_part(tok, body, i, true);
      if (i >= body.size()) error_at(tok, "f-string: expecting '}'");
    }
    if (body[i] != '}') error_at(tok, "f-string: expecting '}'");
    ++i;
  }

  void check_embedded_expression(const Token& tok, std::string_view expr) const;

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline std::vector<Token> tokenize(std::string_view src) { return Tokenizer(src).run(); }

inline void Parser::check_embedded_expression(const Token& tok, std::string_view expr) const {
  std::string wrapped = "(" + std::string(expr) + ")";
  try {
    Parser inner(tokenize(wrapped));
    inner.parse_expression_only();
  } catch (const Failed& f) {
    error_at(tok, "f-string: " + f.failure.message);
  }
}

}  // namespace detail

/// Validates a Python module. Returns the first failure, or nullopt when the
/// source is syntactically valid.
inline std::optional<SyntaxFailure> check_syntax(std::string_view source) {
  try {
    auto tokens = detail::tokenize(source);
    detail::Parser parser(std::move(tokens));
    parser.parse_module();
  } catch (const detail::Failed& f) {
    return f.failure;
  }
  return std::nullopt;
}

/// Token stream for a syntactically valid prefix; throws nothing, returns an
/// empty vector when tokenization fails.
inline std::vector<Token> tokenize_or_empty(std::string_view source) {
  try {
    return detail::tokenize(source);
  } catch (const detail::Failed&) {
    return {};
  }
}

}  // namespace curate::code::python
