// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/style/stats.hpp"

namespace curate::style {

struct DeltaColumn {
  std::string column;
  double before = 0, after = 0, diff = 0;
  std::optional<double> percent;  // none when before == 0
};

using StyleDelta = std::vector<DeltaColumn>;

inline StyleDelta delta_report(const std::array<double, 7>& before, const std::array<double, 7>& after) {
  StyleDelta out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    DeltaColumn c{std::string(kColumns[i]), before[i], after[i], after[i] - before[i], std::nullopt};
    if (before[i] != 0) c.percent = 100.0 * (after[i] - before[i]) / before[i];
    out.push_back(std::move(c));
  }
  return out;
}

/// "+1907.07" / "-183.66"; zero prints unsigned.
inline std::string signed_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) return s[0] == '-' ? s.substr(1) : s;
  return v > 0 ? "+" + s : s;
}

inline std::string format_percent(const std::optional<double>& p) {
  return p ? signed_fixed(*p, 1) + "%" : std::string("undefined");
}

inline std::string render_delta(const StyleDelta& d) {
  std::string out = "column            before      after       diff     percent\n";
  for (const auto& c : d) {
    char line[200];
    std::snprintf(line, sizeof line, "%-15s %9.2f %10.2f %10s %11s\n", c.column.c_str(), c.before, c.after,
                  signed_fixed(c.diff, 2).c_str(), format_percent(c.percent).c_str());
    out += line;
  }
  return out;
}

inline std::string render_stats(const std::array<double, 7>& means, std::size_t n) {
  std::string out = "column               mean   (" + std::to_string(n) + " documents)\n";
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    char line[120];
    std::snprintf(line, sizeof line, "%-15s %10.2f\n", std::string(kColumns[i]).c_str(), means[i]);
    out += line;
  }
  return out;
}

inline Record delta_to_record(const StyleDelta& d) {
  Record arr = Record::array();
  for (const auto& c : d) {
    Record r = Record::object();
    r["column"] = c.column;
    r["before"] = c.before;
    r["after"] = c.after;
    r["diff"] = c.diff;
    r["percent"] = c.percent ? Record(*c.percent) : Record(nullptr);
    arr.push_back(std::move(r));
  }
  return arr;
}

inline constexpr std::array<std::string_view, 4> kBulletBuckets = {"0", "1-5", "6-20", "21+"};

inline std::size_t bullet_bucket(std::size_t bullets) {
  if (bullets == 0) return 0;
  if (bullets <= 5) return 1;
  if (bullets <= 20) return 2;
  return 3;
}

struct BulletHistogram {
  std::array<std::size_t, 4> counts{};
  std::size_t total = 0;
  double fraction(std::size_t bucket) const {
    return static_cast<double>(counts[bucket]) / static_cast<double>(total);
  }
};

inline BulletHistogram bullet_histogram(const std::vector<StyleStats>& stats) {
  if (stats.empty()) throw Error(ErrorCode::invalid_argument, "bullet histogram needs at least one document");
  BulletHistogram h;
  for (const auto& s : stats) ++h.counts[bullet_bucket(s.bullet_count)];
  h.total = stats.size();
  return h;
}

inline Record histogram_to_record(const BulletHistogram& h) {
  Record r = Record::object();
  r["total"] = h.total;
  Record b = Record::array();
  for (std::size_t i = 0; i < kBulletBuckets.size(); ++i)
    b.push_back({{"bucket", std::string(kBulletBuckets[i])}, {"count", h.counts[i]}, {"fraction", h.fraction(i)}});
  r["buckets"] = std::move(b);
  return r;
}

inline Record stats_to_record(const std::array<double, 7>& means, std::size_t n) {
  Record r = Record::object();
  r["documents"] = n;
  for (std::size_t i = 0; i < kColumns.size(); ++i) r[std::string(kColumns[i])] = means[i];
  return r;
}

}  // namespace curate::style
