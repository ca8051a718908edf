// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/core/sample.hpp"
#include "curate/error.hpp"

namespace curate::pack {

inline constexpr std::size_t kDefaultCapacity = 65536;

struct PackItem {
  std::string id;
  std::size_t length = 0;
  bool operator==(const PackItem&) const = default;
};

struct PackedSequence {
  std::size_t capacity = kDefaultCapacity;
  std::vector<PackItem> items;
  std::size_t used = 0;
};

struct PackResult {
  std::vector<PackedSequence> sequences;
  std::size_t capacity = kDefaultCapacity;
  std::size_t total_tokens = 0;
  /// Corpus-wide: total tokens over sequences x capacity; 1.0 when empty.
  double efficiency() const {
    if (sequences.empty()) return 1.0;
    return static_cast<double>(total_tokens) / (static_cast<double>(sequences.size()) * static_cast<double>(capacity));
  }
};

namespace detail {

inline void check_oversize(const std::vector<PackItem>& items, std::size_t capacity) {
  if (capacity == 0) throw Error(ErrorCode::invalid_argument, "capacity must be positive");
  std::string ids;
  std::size_t n = 0;
  for (const auto& it : items)
    if (it.length > capacity) {
      ids += (n++ ? ", " : "") + it.id + " (" + std::to_string(it.length) + ")";
    }
  if (n)
    throw Error(ErrorCode::oversize_sample,
                std::to_string(n) + " sample(s) exceed capacity " + std::to_string(capacity) + ": " + ids);
}

}  // namespace detail

/// Best-fit decreasing. Longest first (ties by id), each item into the
/// sequence with the smallest residual that still fits (ties by lowest
/// index). The ordered residual set keeps this O(n log n).
inline PackResult pack_items(std::vector<PackItem> items, std::size_t capacity = kDefaultCapacity) {
  detail::check_oversize(items, capacity);
  std::sort(items.begin(), items.end(), [](const PackItem& a, const PackItem& b) {
    return a.length != b.length ? a.length > b.length : a.id < b.id;
  });
  PackResult out;
  out.capacity = capacity;
  std::set<std::pair<std::size_t, std::size_t>> open;  // (residual, index) of non-full sequences
  for (auto& it : items) {
    auto pos = open.lower_bound({it.length, 0});
    std::size_t idx;
    if (pos == open.end()) {
      idx = out.sequences.size();
      out.sequences.push_back({capacity, {}, 0});
    } else {
      idx = pos->second;
      open.erase(pos);
    }
    auto& seq = out.sequences[idx];
    seq.used += it.length;
    out.total_tokens += it.length;
    seq.items.push_back(std::move(it));
    if (seq.used < capacity) open.insert({capacity - seq.used, idx});
  }
  return out;
}

inline std::vector<PackItem> items_of(const std::vector<Sample>& samples) {
  std::vector<PackItem> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.push_back({s.id, s.length_tokens});
  return v;
}

inline PackResult pack(const std::vector<Sample>& samples, std::size_t capacity = kDefaultCapacity) {
  return pack_items(items_of(samples), capacity);
}

/// Items in input order into the current sequence until it overflows.
/// Baseline for comparisons only.
inline PackResult pack_sequential(const std::vector<PackItem>& items, std::size_t capacity = kDefaultCapacity) {
  detail::check_oversize(items, capacity);
  PackResult out;
  out.capacity = capacity;
  for (const auto& it : items) {
    if (out.sequences.empty() || out.sequences.back().used + it.length > capacity)
      out.sequences.push_back({capacity, {}, 0});
    out.sequences.back().items.push_back(it);
    out.sequences.back().used += it.length;
    out.total_tokens += it.length;
  }
  return out;
}

inline std::vector<Record> sequences_to_records(const PackResult& r) {
  std::vector<Record> out;
  for (std::size_t i = 0; i < r.sequences.size(); ++i) {
    const auto& s = r.sequences[i];
    Record rec = Record::object();
    rec["sequence"] = i;
    rec["capacity"] = s.capacity;
    rec["used"] = s.used;
    Record items = Record::array();
    for (const auto& it : s.items) items.push_back({{"id", it.id}, {"length_tokens", it.length}});
    rec["items"] = std::move(items);
    out.push_back(std::move(rec));
  }
  return out;
}

inline Record pack_report(const PackResult& r) {
  Record rec = Record::object();
  rec["capacity"] = r.capacity;
  rec["sequences"] = r.sequences.size();
  std::size_t items = 0;
  for (const auto& s : r.sequences) items += s.items.size();
  rec["samples"] = items;
  rec["total_tokens"] = r.total_tokens;
  rec["efficiency"] = r.efficiency();
  return rec;
}

}  // namespace curate::pack
