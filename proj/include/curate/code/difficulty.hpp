// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curate/code/analysis.hpp"
#include "curate/error.hpp"

namespace curate::code {

enum class Difficulty { Easy, Medium, Hard };

constexpr std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return "Easy";
    case Difficulty::Medium: return "Medium";
    case Difficulty::Hard: return "Hard";
  }
  return "Easy";
}

inline std::optional<Difficulty> parse_difficulty(std::string_view s) {
  for (auto d : {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard})
    if (to_string(d) == s) return d;
  return std::nullopt;
}

/// Lowercase, dashes/underscores/slashes to spaces, whitespace collapsed.
inline std::string normalize_tag(std::string_view tag) {
  std::string out;
  bool space = false;
  for (std::size_t i = 0; i < tag.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(tag[i]);
    // U+2013 / U+2014 arrive as E2 80 93 / E2 80 94
    bool dash = c == '-' || c == '_' || c == '/';
    if (c == 0xE2 && i + 2 < tag.size() && static_cast<unsigned char>(tag[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(tag[i + 2]) == 0x93 || static_cast<unsigned char>(tag[i + 2]) == 0x94)) {
      dash = true;
      i += 2;
    }
    if (dash || text::is_space(static_cast<char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

class DifficultyTable {
 public:
  DifficultyTable() {
    for (auto t : {"Array", "String", "Hash Table", "Math", "Simulation"}) set(t, Difficulty::Easy);
    for (auto t : {"Binary Search", "Sliding Window", "Greedy", "Heap", "Backtracking", "Topological Sort",
                   "Union-Find", "Tree/Graph", "DP", "Tree", "Graph", "Recursion", "Graph Algorithms"})
      set(t, Difficulty::Medium);
    for (auto t : {"Suffix Array", "Aho-Corasick", "Min-Cost Max-Flow", "Heavy-Light Decomposition", "Li Chao Tree",
                   "Convex Hull Trick", "Matrix Exponentiation", "Digit/Tree DP", "Digit DP", "Tree DP",
                   "Segment Tree", "Fenwick Tree", "BIT", "Binary Indexed Tree", "Advanced DP", "Optimization"})
      set(t, Difficulty::Hard);
    alias("hashmap", "Hash Table");
    alias("hash map", "Hash Table");
    alias("dictionary", "Hash Table");
    alias("strings", "String");
    alias("arrays", "Array");
    alias("mathematics", "Math");
    alias("dynamic programming", "DP");
    alias("priority queue", "Heap");
    alias("dsu", "Union-Find");
    alias("disjoint set", "Union-Find");
    alias("disjoint set union", "Union-Find");
    alias("toposort", "Topological Sort");
    alias("bfs", "Graph");
    alias("dfs", "Graph");
    alias("two pointers", "Sliding Window");
    alias("mcmf", "Min-Cost Max-Flow");
    alias("hld", "Heavy-Light Decomposition");
    alias("cht", "Convex Hull Trick");
    alias("aho corasick automaton", "Aho-Corasick");
  }

  void set(std::string_view tag, Difficulty d) { map_[normalize_tag(tag)] = d; }
  void alias(std::string_view from, std::string_view to) { map_[normalize_tag(from)] = map_.at(normalize_tag(to)); }

  std::optional<Difficulty> lookup(std::string_view tag) const {
    auto it = map_.find(normalize_tag(tag));
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<std::string, Difficulty> map_;
};

struct DifficultyLabel {
  Difficulty difficulty = Difficulty::Easy;
  std::vector<std::string> unknown_tags;  // mapped to Easy; callers log these
};

/// Max over per-tag difficulties. Unknown tags count as Easy.
inline DifficultyLabel label_difficulty(const std::vector<std::string>& tags, const DifficultyTable& table = {}) {
  if (tags.empty()) throw Error(ErrorCode::no_tags, "difficulty labeling needs at least one tag");
  DifficultyLabel out;
  for (const auto& tag : tags) {
    auto d = table.lookup(tag);
    if (!d) {
      out.unknown_tags.push_back(tag);
      continue;
    }
    if (*d > out.difficulty) out.difficulty = *d;
  }
  return out;
}

/// Fallback when a sample has no tags: algorithm categories recognised in the
/// code text (identifiers and comments). May return an empty list.
inline std::vector<std::string> detect_algorithm_tags(std::string_view code) {
  static const std::vector<std::pair<std::string_view, std::string_view>> cues = {
      {"segment tree", "Segment Tree"}, {"segtree", "Segment Tree"}, {"fenwick", "Fenwick Tree"},
      {"suffix array", "Suffix Array"}, {"aho", "Aho-Corasick"}, {"min cost", "Min-Cost Max-Flow"},
      {"mincost", "Min-Cost Max-Flow"}, {"heavy light", "Heavy-Light Decomposition"}, {"li chao", "Li Chao Tree"},
      {"convex hull", "Convex Hull Trick"}, {"matrix pow", "Matrix Exponentiation"},
      {"mat pow", "Matrix Exponentiation"}, {"digit dp", "Digit DP"},
      {"heapq", "Heap"}, {"priority queue", "Heap"}, {"priorityqueue", "Heap"}, {"binary search", "Binary Search"},
      {"bisect", "Binary Search"}, {"sliding window", "Sliding Window"}, {"greedy", "Greedy"},
      {"backtrack", "Backtracking"}, {"topological", "Topological Sort"}, {"toposort", "Topological Sort"},
      {"union find", "Union-Find"}, {"disjoint set", "Union-Find"}, {"dsu", "Union-Find"}, {"bfs", "Graph"},
      {"dfs", "Graph"}, {"graph", "Graph"}, {"memo", "DP"}, {"dp", "DP"}, {"hash", "Hash Table"},
      {"dict", "Hash Table"}, {"unordered map", "Hash Table"}};
  // Normalized identifiers joined by spaces, so "min_cost" and "MinCost" both match.
  std::string words;
  for (const auto& id : identifiers(code)) {
    std::string n;
    for (std::size_t i = 0; i < id.name.size(); ++i) {
      char c = id.name[i];
      if (i > 0 && std::isupper(static_cast<unsigned char>(c)) && std::islower(static_cast<unsigned char>(id.name[i - 1])))
        n += ' ';
      n += c;
    }
    words += ' ' + normalize_tag(n) + ' ';
  }
  std::vector<std::string> out;
  for (const auto& [cue, tag] : cues) {
    if ((words.find(' ' + std::string(cue) + ' ') != std::string::npos ||
         (cue.size() > 4 && words.find(std::string(cue)) != std::string::npos)) &&
        std::find(out.begin(), out.end(), tag) == out.end())
      out.emplace_back(tag);
  }
  return out;
}

}  // namespace curate::code
