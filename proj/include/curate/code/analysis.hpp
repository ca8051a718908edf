// SPDX-License-Identifier: Apache-2.0
//
// Shallow, language-aware structure probes used by the education scorer and
// the file-level filter. None of this is a real name resolver; the goal is a
// cheap deterministic signal.
#pragma once

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "curate/code/language.hpp"
#include "curate/code/python_parser.hpp"

namespace curate::code {

struct Ident {
  std::string name;
  char before = '\0';  // previous non-space character, '\0' at start
  char after = '\0';   // next non-space character
  char after2 = '\0';  // the one after that
  std::string prev_word;  // previous identifier if only spaces separate them
  std::size_t depth = 0;  // bracket depth
  std::size_t line = 1;
  std::size_t column = 1;  // 1-based, of the first character
};

/// Replaces string literal contents and comments with spaces, preserving
/// line structure and quote characters.
inline std::string strip_literals(std::string_view code, Language lang) {
  std::string out(code);
  bool hash_comments = lang == Language::python || lang == Language::shell || lang == Language::other;
  bool slash_comments = is_brace_language(lang);
  std::size_t i = 0;
  auto blank = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = from; k < to && k < out.size(); ++k)
      if (out[k] != '\n') out[k] = ' ';
  };
  while (i < code.size()) {
    char c = code[i];
    if (hash_comments && c == '#') {
      std::size_t e = code.find('\n', i);
      if (e == std::string_view::npos) e = code.size();
      blank(i, e);
      i = e;
      continue;
    }
    if (slash_comments && c == '/' && i + 1 < code.size() && code[i + 1] == '/') {
      std::size_t e = code.find('\n', i);
      if (e == std::string_view::npos) e = code.size();
      blank(i, e);
      i = e;
      continue;
    }
    if (slash_comments && c == '/' && i + 1 < code.size() && code[i + 1] == '*') {
      std::size_t e = code.find("*/", i + 2);
      e = e == std::string_view::npos ? code.size() : e + 2;
      blank(i, e);
      i = e;
      continue;
    }
    if (lang == Language::sql && c == '-' && i + 1 < code.size() && code[i + 1] == '-') {
      std::size_t e = code.find('\n', i);
      if (e == std::string_view::npos) e = code.size();
      blank(i, e);
      i = e;
      continue;
    }
    bool quote = c == '"' || c == '`' || (c == '\'' && lang != Language::rust);
    if (quote) {
      bool triple = lang == Language::python && i + 2 < code.size() && code[i + 1] == c && code[i + 2] == c;
      std::string_view close = triple ? code.substr(i, 3) : code.substr(i, 1);
      std::size_t k = i + close.size();
      while (k < code.size()) {
        if (code[k] == '\\') {
          k += 2;
          continue;
        }
        if (code.substr(k, close.size()) == close) break;
        if (code[k] == '\n' && !triple && c != '`') break;
        ++k;
      }
      blank(i + close.size(), std::min(k, code.size()));
      i = std::min(k + close.size(), code.size());
      continue;
    }
    ++i;
  }
  return out;
}

/// Identifiers of already stripped text, with their neighbouring characters.
inline std::vector<Ident> identifiers(std::string_view stripped) {
  std::vector<Ident> out;
  std::size_t depth = 0;
  std::size_t line = 1;
  std::size_t line_begin = 0;
  std::string last_word;
  std::size_t last_word_end = std::string_view::npos;
  char prev = '\0';
  std::size_t i = 0;
  auto next_nonspace = [&](std::size_t from) -> std::size_t {
    while (from < stripped.size() && text::is_space(stripped[from])) ++from;
    return from;
  };
  while (i < stripped.size()) {
    char c = stripped[i];
    if (c == '\n') {
      ++line;
      line_begin = i + 1;
    }
    if (text::is_ident_start(c) && !(i > 0 && std::isdigit(static_cast<unsigned char>(stripped[i - 1])))) {
      std::size_t b = i;
      while (i < stripped.size() && text::is_ident_char(stripped[i])) ++i;
      Ident id;
      id.name = std::string(stripped.substr(b, i - b));
      id.before = prev;
      std::size_t n1 = next_nonspace(i);
      std::size_t n2 = n1 < stripped.size() ? next_nonspace(n1 + 1) : n1;
      id.after = n1 < stripped.size() ? stripped[n1] : '\0';
      id.after2 = n2 < stripped.size() ? stripped[n2] : '\0';
      bool adjacent = last_word_end != std::string_view::npos &&
                      std::all_of(stripped.begin() + last_word_end, stripped.begin() + b,
                                  [](char ch) { return ch == ' ' || ch == '\t'; });
      if (adjacent) id.prev_word = last_word;
      id.depth = depth;
      id.line = line;
      id.column = b - line_begin + 1;
      last_word = id.name;
      last_word_end = i;
      prev = id.name.back();
      out.push_back(std::move(id));
      continue;
    }
    if (c == '(' || c == '[' || c == '{') ++depth;
    if ((c == ')' || c == ']' || c == '}') && depth > 0) --depth;
    if (!text::is_space(c)) {
      prev = c;
      if (!text::is_ident_char(c)) last_word_end = std::string_view::npos;
    }
    ++i;
  }
  return out;
}

namespace detail {

inline const std::unordered_set<std::string>& python_builtins() {
  static const std::unordered_set<std::string> names = {
      "print", "len", "range", "int", "str", "float", "list", "dict", "set", "tuple", "bool", "sum", "min", "max",
      "abs", "sorted", "reversed", "enumerate", "zip", "map", "filter", "any", "all", "open", "input", "isinstance",
      "issubclass", "type", "object", "super", "self", "cls", "hasattr", "getattr", "setattr", "delattr", "iter",
      "next", "round", "pow", "divmod", "chr", "ord", "repr", "hash", "id", "format", "vars", "dir", "bytes",
      "bytearray", "frozenset", "property", "staticmethod", "classmethod", "callable", "exit", "quit", "complex",
      "slice", "bin", "hex", "oct", "globals", "locals", "eval", "exec", "compile", "help", "ascii", "memoryview",
      "NotImplemented", "Ellipsis", "Exception", "BaseException", "ValueError", "TypeError", "KeyError", "IndexError",
      "RuntimeError", "StopIteration", "NotImplementedError", "AttributeError", "ZeroDivisionError", "OSError",
      "IOError", "FileNotFoundError", "AssertionError", "ImportError", "NameError", "ArithmeticError",
      "OverflowError", "KeyboardInterrupt", "SystemExit", "RecursionError", "LookupError", "UnicodeDecodeError",
      "PermissionError", "TimeoutError", "__name__", "__file__", "__main__", "__init__", "__doc__"};
  return names;
}

inline const std::unordered_set<std::string>& brace_keywords() {
  static const std::unordered_set<std::string> names = {
      "if", "else", "for", "while", "do", "switch", "case", "default", "break", "continue", "return", "goto", "try",
      "catch", "finally", "throw", "throws", "new", "delete", "class", "struct", "union", "enum", "interface",
      "extends", "implements", "public", "private", "protected", "internal", "static", "const", "constexpr",
      "final", "virtual", "override", "abstract", "volatile", "extern", "inline", "typedef", "typename", "template",
      "namespace", "using", "import", "package", "export", "include", "define", "ifdef", "ifndef", "endif", "pragma",
      "void", "int", "char", "short", "long", "float", "double", "bool", "boolean", "byte", "unsigned", "signed",
      "auto", "var", "let", "function", "fn", "func", "impl", "trait", "mut", "pub", "use", "mod", "crate", "self",
      "Self", "super", "this", "true", "false", "null", "nullptr", "nil", "undefined", "None", "Some", "Ok", "Err",
      "match", "loop", "in", "of", "as", "is", "typeof", "instanceof", "sizeof", "alignof", "decltype", "async",
      "await", "yield", "go", "defer", "chan", "select", "map", "range", "type", "where", "readonly", "string",
      "String", "object", "dynamic", "operator", "friend", "mutable", "noexcept", "explicit", "register", "std",
      "uint8_t", "uint16_t", "uint32_t", "uint64_t", "int8_t", "int16_t", "int32_t", "int64_t", "size_t", "i32",
      "i64", "u8", "u32", "u64", "usize", "isize", "f32", "f64", "str", "let", "lock", "foreach", "get", "set",
      "main", "args", "println", "printf", "elif", "fi", "then", "done", "esac"};
  return names;
}

inline const std::unordered_set<std::string>& brace_builtin_calls() {
  static const std::unordered_set<std::string> names = {
      "printf", "scanf", "puts", "putchar", "getchar", "fprintf", "sprintf", "snprintf", "malloc", "calloc",
      "realloc", "free", "memset", "memcpy", "memmove", "strlen", "strcmp", "strncmp", "strcpy", "strncpy", "strcat",
      "atoi", "atof", "exit", "abort", "assert", "sizeof", "abs", "sqrt", "pow", "min", "max", "swap", "sort",
      "println", "print", "format", "len", "append", "make", "panic", "cap", "copy", "delete", "close", "recover",
      "require", "parseInt", "parseFloat", "setTimeout", "setInterval", "alert", "Number", "String", "Array",
      "Object", "Boolean", "Promise", "Symbol", "isNaN", "Date", "Error", "Map", "Set", "vec", "Box", "Vec",
      "Some", "Ok", "Err", "write", "writeln", "format_args", "todo", "unimplemented", "unreachable", "matches",
      "dbg", "eprintln", "main", "static_cast", "dynamic_cast", "reinterpret_cast", "const_cast", "decltype",
      "typeid", "alignof", "static_assert", "nameof", "typeof"};
  return names;
}

inline bool is_python_reserved(const std::string& s) { return python::is_keyword(s) || s == "match" || s == "case"; }

// Python bindings and uses from the token stream (only valid code gets here).
inline bool python_self_contained(std::string_view code) {
  using python::Token;
  using python::TokenType;
  auto toks = python::tokenize_or_empty(code);
  if (toks.empty()) return false;
  std::unordered_set<std::string> bound;
  auto is_op = [&](std::size_t i, std::string_view s) {
    return i < toks.size() && toks[i].type == TokenType::op && toks[i].text == s;
  };
  auto is_name = [&](std::size_t i) {
    return i < toks.size() && toks[i].type == TokenType::name && !python::is_keyword(toks[i].text);
  };
  auto is_kw = [&](std::size_t i, std::string_view s) {
    return i < toks.size() && toks[i].type == TokenType::name && toks[i].text == s;
  };
  auto bind = [&](std::size_t i) { bound.insert(std::string(toks[i].text)); };

  // Statement boundaries for assignment detection.
  std::size_t stmt_begin = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.type == TokenType::newline || t.type == TokenType::indent || t.type == TokenType::dedent ||
        is_op(i, ";")) {
      stmt_begin = i + 1;
      continue;
    }
    if ((is_kw(i, "def") || is_kw(i, "class")) && is_name(i + 1)) {
      bind(i + 1);
      if (is_kw(i, "def") && is_op(i + 2, "(")) {
        std::size_t depth = 0;
        for (std::size_t k = i + 2; k < toks.size(); ++k) {
          if (toks[k].type == TokenType::op && (toks[k].text == "(" || toks[k].text == "[" || toks[k].text == "{")) ++depth;
          if (toks[k].type == TokenType::op && (toks[k].text == ")" || toks[k].text == "]" || toks[k].text == "}")) {
            if (--depth == 0) break;
          }
          if (depth == 1 && is_name(k) &&
              (is_op(k - 1, "(") || is_op(k - 1, ",") || is_op(k - 1, "*") || is_op(k - 1, "**")))
            bind(k);
        }
      }
    }
    if (is_kw(i, "lambda")) {
      for (std::size_t k = i + 1; k < toks.size() && !is_op(k, ":"); ++k)
        if (is_name(k)) bind(k);
    }
    if (is_kw(i, "import")) {
      for (std::size_t k = i + 1; k < toks.size() && toks[k].type != TokenType::newline && !is_op(k, ";"); ++k) {
        if (!is_name(k)) continue;
        bool after_sep = is_kw(k - 1, "import") || is_op(k - 1, ",") || is_op(k - 1, "(") || is_kw(k - 1, "as");
        if (after_sep && !is_kw(k + 1, "as")) bind(k);
      }
    }
    if (is_kw(i, "as") && is_name(i + 1)) bind(i + 1);
    if (is_kw(i, "global") || is_kw(i, "nonlocal")) {
      for (std::size_t k = i + 1; k < toks.size() && toks[k].type != TokenType::newline; ++k)
        if (is_name(k)) bind(k);
    }
    if (is_kw(i, "for")) {
      for (std::size_t k = i + 1; k < toks.size() && !is_kw(k, "in"); ++k)
        if (is_name(k)) bind(k);
    }
    if (is_op(i, ":=") && i > 0 && is_name(i - 1)) bind(i - 1);
    if (is_op(i, "=")) {
      // skip keyword arguments: an '=' inside brackets
      std::size_t depth = 0;
      for (std::size_t k = stmt_begin; k < i; ++k) {
        const Token& u = toks[k];
        if (u.type == TokenType::op && (u.text == "(" || u.text == "[" || u.text == "{")) ++depth;
        if (u.type == TokenType::op && (u.text == ")" || u.text == "]" || u.text == "}") && depth > 0) --depth;
      }
      if (depth == 0) {
        for (std::size_t k = stmt_begin; k < i; ++k)
          if (is_name(k) && !is_op(k - 1, ".")) bind(k);
      }
    }
  }
  std::size_t depth = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.type == TokenType::op) {
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if ((t.text == ")" || t.text == "]" || t.text == "}") && depth > 0) --depth;
      continue;
    }
    if (!is_name(i)) continue;
    if (i > 0 && is_op(i - 1, ".")) continue;
    if (depth > 0 && is_op(i + 1, "=")) continue;  // keyword argument
    std::string name(t.text);
    if (is_python_reserved(name)) continue;
    if (bound.count(name) || python_builtins().count(name)) continue;
    return false;
  }
  return true;
}

inline bool brace_self_contained(std::string_view code, Language lang) {
  auto ids = identifiers(strip_literals(code, lang));
  if (ids.empty()) return false;
  std::unordered_set<std::string> declared;
  for (const auto& id : ids) {
    bool typed = !id.prev_word.empty() && id.prev_word != "return" && id.prev_word != "else" &&
                 id.prev_word != "new" && id.prev_word != "case" && id.prev_word != "throw" && id.prev_word != "await";
    if (typed || id.before == '>' || id.before == '*' || id.before == '&') declared.insert(id.name);
    if (id.after == '=' && id.after2 != '=') declared.insert(id.name);
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& id = ids[i];
    if (id.after != '(') continue;
    if (id.before == '.' || id.before == ':' || id.before == '>' || id.before == '#') continue;
    if (brace_keywords().count(id.name) || brace_builtin_calls().count(id.name)) continue;
    if (!id.prev_word.empty()) continue;  // a declaration, not a call
    if (i > 0 && ids[i - 1].name == "new") continue;
    if (declared.count(id.name)) continue;
    if (id.after == '(' && id.before == '!') continue;
    return false;
  }
  return true;
}

}  // namespace detail

inline bool has_function_definition(std::string_view code, Language lang) {
  std::string s = strip_literals(code, lang);
  if (lang == Language::python) {
    static const std::regex re(R"((^|\n)[ \t]*(async[ \t]+)?def[ \t]+\w+|\blambda\b)");
    return std::regex_search(s, re);
  }
  for (const auto& id : identifiers(s)) {
    if ((lang == Language::rust && id.name == "fn") || (lang == Language::go && id.name == "func") ||
        ((lang == Language::javascript || lang == Language::typescript) && id.name == "function"))
      return true;
  }
  if ((lang == Language::javascript || lang == Language::typescript) && s.find("=>") != std::string::npos) return true;
  if (lang == Language::shell) {
    static const std::regex sh(R"((^|\n)[ \t]*(function[ \t]+)?\w+[ \t]*\(\)[ \t]*\{)");
    return std::regex_search(s, sh);
  }
  if (lang == Language::sql) return text::contains(text::to_lower(s), "create function") ||
                                    text::contains(text::to_lower(s), "create procedure");
  if (!is_brace_language(lang)) return false;
  // name ( params ) [qualifiers] {  where name is not a control keyword
  static const std::regex fn(R"(\b([A-Za-z_]\w*)\s*\([^;{}]*\)\s*(const\s*)?(noexcept\s*)?(override\s*)?(throws\s+[\w\s,.]+)?(->\s*[\w:<>&*\s]+)?\{)");
  static const std::set<std::string> control = {"if", "for", "while", "switch", "catch", "return", "sizeof", "using",
                                                "lock", "foreach", "fixed", "synchronized", "else"};
  for (std::sregex_iterator it(s.begin(), s.end(), fn), end; it != end; ++it)
    if (!control.count((*it)[1].str())) return true;
  return false;
}

inline bool has_control_flow(std::string_view code, Language lang) {
  static const std::unordered_set<std::string> words = {"if", "for", "while", "switch", "loop", "elif", "foreach",
                                                        "until", "case", "match"};
  std::string s = strip_literals(code, lang);
  if (lang == Language::sql) s = text::to_lower(s);
  for (const auto& id : identifiers(s)) {
    if (!words.count(id.name)) continue;
    if (lang == Language::python && (id.name == "match" || id.name == "case")) continue;
    if (lang != Language::rust && id.name == "match") continue;
    if (lang == Language::sql && id.name != "case" && id.name != "while" && id.name != "if") continue;
    return true;
  }
  return false;
}

/// No identifier is used without a local binding or a known builtin.
inline bool is_self_contained(std::string_view code, Language lang) {
  if (text::is_blank(code)) return false;
  if (lang == Language::python) return detail::python_self_contained(code);
  if (is_brace_language(lang)) return detail::brace_self_contained(code, lang);
  return true;  // no meaningful name check for sql, shell and other
}

/// Top-level definitions in a snippet: (name, identifiers used in it).
struct TopLevelDefinition {
  std::string name;
  std::set<std::string> identifiers;
};

namespace detail {

inline bool is_common_identifier(const std::string& s, Language lang) {
  if (lang == Language::python) return is_python_reserved(s) || python_builtins().count(s) > 0;
  return brace_keywords().count(s) > 0 || brace_builtin_calls().count(s) > 0;
}

}  // namespace detail

inline std::vector<TopLevelDefinition> top_level_definitions(std::string_view code, Language lang) {
  std::vector<TopLevelDefinition> defs;
  std::string stripped = strip_literals(code, lang);
  if (lang == Language::python) {
    auto lines = text::split_lines(stripped);
    static const std::regex head(R"(^(async[ \t]+)?(def|class)[ \t]+(\w+))");
    TopLevelDefinition* current = nullptr;
    for (auto line : lines) {
      std::string l(line);
      std::smatch m;
      if (std::regex_search(l, m, head)) {
        defs.push_back({m[3].str(), {}});
        current = &defs.back();
      } else if (!line.empty() && !text::is_space(line[0]) && !text::is_blank(line) && line[0] != '@' &&
                 line[0] != ')' && line[0] != ']' && line[0] != '}') {
        current = nullptr;
      }
      if (current)
        for (const auto& id : identifiers(l))
          if (!detail::is_common_identifier(id.name, lang)) current->identifiers.insert(id.name);
    }
    return defs;
  }
  if (!is_brace_language(lang)) return defs;
  // Top-level brace blocks. The header is the text since the previous
  // top-level ';' or '}'.
  std::size_t depth = 0;
  std::size_t header_begin = 0;
  std::size_t block_begin = 0;
  for (std::size_t i = 0; i < stripped.size(); ++i) {
    char c = stripped[i];
    if (c == '{') {
      if (depth == 0) block_begin = i;
      ++depth;
    } else if (c == '}' && depth > 0) {
      --depth;
      if (depth == 0) {
        std::string_view header = std::string_view(stripped).substr(header_begin, block_begin - header_begin);
        std::string_view whole = std::string_view(stripped).substr(header_begin, i + 1 - header_begin);
        auto head_ids = identifiers(header);
        std::string name;
        bool is_definition = false;
        for (std::size_t k = 0; k < head_ids.size(); ++k) {
          const auto& id = head_ids[k];
          if (id.name == "class" || id.name == "struct" || id.name == "interface" || id.name == "enum" ||
              id.name == "impl" || id.name == "trait" || id.name == "fn" || id.name == "func" ||
              id.name == "function") {
            is_definition = true;
            std::size_t n = k + 1;
            // Go methods put the receiver first: func (r T) name(
            if (id.name == "func" && n < head_ids.size() && head_ids[n].before == '(') {
              for (std::size_t m = k + 1; m < head_ids.size(); ++m)
                if (head_ids[m].before == ')' && head_ids[m].after == '(') {
                  n = m;
                  break;
                }
            }
            if (n < head_ids.size()) name = head_ids[n].name;
            break;
          }
          if (id.after == '(' && !detail::brace_keywords().count(id.name)) {
            is_definition = true;
            name = id.name;
            break;
          }
        }
        bool namespace_block = !head_ids.empty() && (head_ids.front().name == "namespace" || head_ids.front().name == "package");
        if (is_definition && !namespace_block) {
          TopLevelDefinition d{name, {}};
          for (const auto& id : identifiers(whole))
            if (!detail::is_common_identifier(id.name, lang)) d.identifiers.insert(id.name);
          defs.push_back(std::move(d));
        }
        header_begin = i + 1;
      }
    } else if (c == ';' && depth == 0) {
      header_begin = i + 1;
    } else if (c == '\n' && depth == 0) {
      // preprocessor lines end a header
      std::size_t k = i + 1;
      while (k < stripped.size() && (stripped[k] == ' ' || stripped[k] == '\t')) ++k;
      if (k < stripped.size() && stripped[k] == '#') {
        std::size_t e = stripped.find('\n', k);
        header_begin = e == std::string::npos ? stripped.size() : e;
        i = header_begin == stripped.size() ? stripped.size() - 1 : header_begin - 1;
      }
    }
  }
  return defs;
}

/// Number of groups of top-level definitions after linking every pair that
/// shares an identifier (a reference by name counts as sharing).
inline std::size_t unrelated_definition_groups(std::string_view code, Language lang) {
  auto defs = top_level_definitions(code, lang);
  std::vector<std::size_t> parent(defs.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < defs.size(); ++i)
    for (std::size_t j = i + 1; j < defs.size(); ++j) {
      bool linked = std::any_of(defs[i].identifiers.begin(), defs[i].identifiers.end(),
                                [&](const std::string& n) { return defs[j].identifiers.count(n) > 0; });
      if (linked) parent[find(i)] = find(j);
    }
  std::size_t groups = 0;
  for (std::size_t i = 0; i < defs.size(); ++i)
    if (find(i) == i) ++groups;
  return groups;
}

}  // namespace curate::code
