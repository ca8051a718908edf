// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curate/code/fences.hpp"
#include "curate/core/sample.hpp"
#include "curate/core/text.hpp"
#include "curate/error.hpp"

namespace curate::code {

// Declaration order is the deterministic tie-break order of the scorer.
enum class Language { python, cpp, c, java, javascript, typescript, go, rust, csharp, sql, shell, other };

inline constexpr std::array<Language, 12> kAllLanguages = {
    Language::python, Language::cpp,  Language::c,      Language::java,  Language::javascript, Language::typescript,
    Language::go,     Language::rust, Language::csharp, Language::sql,   Language::shell,      Language::other};

constexpr std::string_view to_string(Language l) {
  switch (l) {
    case Language::python: return "python";
    case Language::cpp: return "cpp";
    case Language::c: return "c";
    case Language::java: return "java";
    case Language::javascript: return "javascript";
    case Language::typescript: return "typescript";
    case Language::go: return "go";
    case Language::rust: return "rust";
    case Language::csharp: return "csharp";
    case Language::sql: return "sql";
    case Language::shell: return "shell";
    case Language::other: return "other";
  }
  return "other";
}

inline std::optional<Language> parse_language(std::string_view s) {
  for (auto l : kAllLanguages)
    if (to_string(l) == s) return l;
  return std::nullopt;
}

constexpr bool is_brace_language(Language l) {
  switch (l) {
    case Language::cpp:
    case Language::c:
    case Language::java:
    case Language::javascript:
    case Language::typescript:
    case Language::go:
    case Language::rust:
    case Language::csharp: return true;
    default: return false;
  }
}

/// Fence tag -> language. Lookups are case-insensitive; extra entries from
/// configuration override the built-in ones.
class AliasTable {
 public:
  AliasTable() {
    for (auto l : kAllLanguages) map_[std::string(to_string(l))] = l;
    const std::pair<const char*, Language> builtin[] = {
        {"py", Language::python},         {"python3", Language::python},   {"py3", Language::python},
        {"ipython", Language::python},    {"c++", Language::cpp},          {"cxx", Language::cpp},
        {"cc", Language::cpp},            {"hpp", Language::cpp},          {"h++", Language::cpp},
        {"h", Language::c},               {"js", Language::javascript},    {"node", Language::javascript},
        {"jsx", Language::javascript},    {"mjs", Language::javascript},   {"ts", Language::typescript},
        {"tsx", Language::typescript},    {"golang", Language::go},        {"rs", Language::rust},
        {"cs", Language::csharp},         {"c#", Language::csharp},        {"dotnet", Language::csharp},
        {"postgres", Language::sql},      {"postgresql", Language::sql},   {"mysql", Language::sql},
        {"sqlite", Language::sql},        {"plsql", Language::sql},        {"tsql", Language::sql},
        {"bash", Language::shell},        {"sh", Language::shell},         {"zsh", Language::shell},
        {"console", Language::shell},     {"shell-session", Language::shell}, {"ksh", Language::shell},
    };
    for (const auto& [alias, lang] : builtin) map_[alias] = lang;
  }

  void set(std::string_view alias, Language lang) { map_[text::to_lower(alias)] = lang; }

  /// Unknown tags map to `other`: they name a language outside the predefined set.
  Language resolve(std::string_view tag) const {
    auto it = map_.find(text::to_lower(tag));
    return it == map_.end() ? Language::other : it->second;
  }

 private:
  std::map<std::string, Language, std::less<>> map_;
};

struct Signature {
  std::string_view needle;
  double weight;
};

namespace detail {

struct LanguageSignatures {
  Language language;
  bool case_insensitive;
  std::vector<Signature> signatures;
};

inline const std::vector<LanguageSignatures>& signature_table() {
  static const std::vector<LanguageSignatures> table = {
      {Language::python,
       false,
       {{"\ndef ", 3}, {"def ", 1}, {"elif ", 3}, {"self.", 2}, {"__init__", 3}, {"__name__", 3}, {"print(", 1},
        {"import ", 0.5}, {"from ", 0.5}, {"lambda ", 2}, {"range(", 2}, {"None", 1}, {"True", 0.5}, {"False", 0.5},
        {"):\n", 2}, {"len(", 1}, {" in ", 0.5}}},
      {Language::cpp,
       false,
       {{"#include <iostream>", 3}, {"#include", 2}, {"std::", 3}, {"cout", 2}, {"template <", 3}, {"template<", 3},
        {"nullptr", 2}, {"vector<", 2}, {"namespace ", 1}, {"::", 1}, {"auto ", 0.5}, {"const&", 1}, {"& ", 0.25}}},
      {Language::c,
       false,
       {{"#include <stdio.h>", 4}, {"#include <stdlib.h>", 3}, {"#include", 2}, {"printf(", 2}, {"malloc(", 2},
        {"scanf(", 2}, {"int main(", 1}, {"struct ", 1}, {"free(", 1}, {"->", 0.5}}},
      {Language::java,
       false,
       {{"public static void main", 4}, {"System.out", 3}, {"public class", 3}, {"import java.", 3},
        {"private ", 1}, {"String[]", 2}, {"@Override", 2}, {"new ", 0.5}, {"extends ", 1}, {"public ", 0.5}}},
      {Language::javascript,
       false,
       {{"function ", 2}, {"const ", 1}, {"let ", 1}, {"console.log", 3}, {"=>", 1}, {"require(", 2},
        {"document.", 2}, {"===", 2}, {"var ", 1}, {"module.exports", 3}, {"undefined", 1}}},
      {Language::typescript,
       false,
       {{": string", 3}, {": number", 3}, {": boolean", 3}, {"interface ", 2}, {"export ", 1}, {"=>", 1},
        {"console.log", 2}, {"const ", 0.5}, {"let ", 0.5}, {": void", 2}, {"readonly ", 2}}},
      {Language::go,
       false,
       {{"package main", 4}, {"package ", 1}, {"func ", 3}, {":=", 2}, {"fmt.", 3}, {"import (", 2}, {"go func", 2},
        {"chan ", 2}, {"nil", 1}}},
      {Language::rust,
       false,
       {{"fn ", 3}, {"let mut ", 3}, {"println!", 3}, {"impl ", 2}, {"&str", 2}, {"use std::", 3}, {"::new(", 1},
        {"match ", 1}, {"Vec<", 2}, {"pub fn", 2}, {"&mut ", 2}, {"->", 0.5}}},
      {Language::csharp,
       false,
       {{"using System", 4}, {"Console.WriteLine", 4}, {"static void Main", 3}, {"string[] args", 2}, {"get;", 2},
        {"namespace ", 1}, {"public class", 1}, {"var ", 0.5}}},
      {Language::sql,
       true,
       {{"select ", 3}, {"from ", 1}, {"where ", 2}, {"insert into", 3}, {"create table", 4}, {"join ", 2},
        {"group by", 2}, {"order by", 2}, {"update ", 1}, {"primary key", 2}}},
      {Language::shell,
       false,
       {{"#!/bin/bash", 5}, {"#!/bin/sh", 5}, {"#!/usr/bin/env bash", 5}, {"echo ", 2}, {"$(", 2}, {"\nfi", 2},
        {"; then", 2}, {"\ndone", 1}, {"sudo ", 2}, {"apt-get", 2}, {"${", 1}, {"| grep", 2}, {"\nexport ", 1}}},
  };
  return table;
}

}  // namespace detail

/// Per-language totals of the weighted signature scorer, in enum order
/// (excluding `other`).
inline std::vector<std::pair<Language, double>> signature_scores(std::string_view code) {
  std::string padded = "\n" + std::string(code);
  std::string lowered = text::to_lower(padded);
  std::vector<std::pair<Language, double>> out;
  for (const auto& entry : detail::signature_table()) {
    const std::string& haystack = entry.case_insensitive ? lowered : padded;
    double total = 0;
    for (const auto& sig : entry.signatures)
      if (haystack.find(sig.needle) != std::string::npos) total += sig.weight;
    out.emplace_back(entry.language, total);
  }
  return out;
}

/// Deterministic fallback classifier: highest signature score wins, ties go
/// to the earlier language in declaration order, zero everywhere -> other.
inline Language classify_by_signatures(std::string_view code) {
  Language best = Language::other;
  double best_score = 0;
  for (const auto& [lang, score] : signature_scores(code)) {
    if (score > best_score) {
      best = lang;
      best_score = score;
    }
  }
  return best;
}

/// A pluggable replacement for the signature scorer (e.g. a learned model).
using LanguageClassifier = std::function<Language(std::string_view code)>;

/// Cheap check that text has some code-like structure at all.
inline bool looks_like_code(std::string_view s) {
  if (text::is_blank(s)) return false;
  for (char c : s)
    if (c == '(' || c == ')' || c == '{' || c == '}' || c == '[' || c == ']' || c == ';' || c == '=' || c == '<' ||
        c == '>' || c == ':')
      return true;
  return classify_by_signatures(s) != Language::other;
}

/// The code a sample carries. Assistant messages are preferred; other roles are
/// only consulted when no assistant message has a fenced block.
struct CodeContent {
  std::vector<CodeBlock> blocks;
  bool raw = false;
  std::string raw_text;

  /// The block that drives language, score and executability: the first
  /// tagged block if any, else the first nonblank block.
  const CodeBlock* primary() const {
    for (const auto& b : blocks)
      if (!b.tag.empty()) return &b;
    for (const auto& b : blocks)
      if (!text::is_blank(b.content)) return &b;
    return nullptr;
  }

  std::string primary_code() const {
    if (raw) return raw_text;
    const CodeBlock* p = primary();
    return p ? p->content : std::string();
  }
};

inline bool is_raw_code(const Sample& s) {
  return s.has_meta("raw_code") && s.meta["raw_code"].is_boolean() && s.meta["raw_code"].get<bool>();
}

inline CodeContent code_content(const Sample& s) {
  CodeContent c;
  if (is_raw_code(s)) {
    c.raw = true;
    c.raw_text = s.first_with_role(Role::assistant) ? s.joined(Role::assistant) : s.concatenated_text();
    return c;
  }
  for (const auto& m : s.messages)
    if (m.role == Role::assistant)
      for (auto& b : extract_code_blocks(m.content)) c.blocks.push_back(std::move(b));
  if (c.blocks.empty())
    for (const auto& m : s.messages)
      for (auto& b : extract_code_blocks(m.content)) c.blocks.push_back(std::move(b));
  return c;
}

/// Two-step identification: the first tagged fence decides, otherwise the
/// fallback classifier runs on the primary block.
inline Language identify_language(const Sample& s, const AliasTable& aliases = {},
                                  const LanguageClassifier& fallback = {}) {
  CodeContent content = code_content(s);
  if (!content.raw) {
    for (const auto& b : content.blocks)
      if (!b.tag.empty()) return aliases.resolve(b.tag);
  }
  std::string code = content.primary_code();
  if (!looks_like_code(code))
    throw Error(ErrorCode::not_a_code_sample, "sample '" + s.id + "' carries no code");
  return fallback ? fallback(code) : classify_by_signatures(code);
}

}  // namespace curate::code
