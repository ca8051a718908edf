// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/core/sample.hpp"
#include "curate/error.hpp"

namespace curate {

struct AxisDistribution {
  std::string axis;
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;

  double fraction(const std::string& bucket) const {
    auto it = counts.find(bucket);
    return it == counts.end() || total == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
  }

  /// Buckets whose share strictly exceeds the threshold.
  std::vector<std::string> dominant(double threshold) const {
    std::vector<std::string> out;
    for (const auto& [bucket, n] : counts)
      if (fraction(bucket) > threshold) out.push_back(bucket);
    return out;
  }

  void merge(const AxisDistribution& other) {
    for (const auto& [bucket, n] : other.counts) counts[bucket] += n;
    total += other.total;
  }
};

struct DistributionReport {
  std::vector<AxisDistribution> axes;
  double dominance_threshold = 0.5;

  const AxisDistribution& axis(const std::string& name) const {
    for (const auto& a : axes)
      if (a.axis == name) return a;
    throw Error(ErrorCode::invalid_argument, "no axis '" + name + "' in report");
  }

  /// Associative merge of two reports over the same axes.
  void merge(const DistributionReport& other) {
    if (other.axes.size() != axes.size())
      throw Error(ErrorCode::invalid_argument, "cannot merge reports over different axes");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      if (axes[i].axis != other.axes[i].axis)
        throw Error(ErrorCode::invalid_argument, "cannot merge reports over different axes");
      axes[i].merge(other.axes[i]);
    }
  }

  Record to_record() const {
    Record r = Record::object();
    r["dominance_threshold"] = dominance_threshold;
    Record arr = Record::array();
    for (const auto& a : axes) {
      Record ar = Record::object();
      ar["axis"] = a.axis;
      ar["total"] = a.total;
      Record buckets = Record::array();
      for (const auto& [bucket, n] : a.counts) {
        Record b = Record::object();
        b["bucket"] = bucket;
        b["count"] = n;
        b["fraction"] = a.fraction(bucket);
        b["dominant"] = a.fraction(bucket) > dominance_threshold;
        buckets.push_back(std::move(b));
      }
      ar["buckets"] = std::move(buckets);
      arr.push_back(std::move(ar));
    }
    r["axes"] = std::move(arr);
    return r;
  }
};

/// Meta values become bucket names: strings verbatim, anything else as JSON.
inline std::string bucket_name(const Meta& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

inline DistributionReport distribution_report(const std::vector<Sample>& samples, const std::vector<std::string>& axes,
                                              double dominance_threshold = 0.5) {
  DistributionReport report;
  report.dominance_threshold = dominance_threshold;
  for (const auto& axis : axes) report.axes.push_back({axis, {}, 0});
  for (const auto& s : samples) {
    for (auto& a : report.axes) {
      if (!s.has_meta(a.axis))
        throw Error(ErrorCode::missing_key, "sample '" + s.id + "' lacks meta key '" + a.axis + "'");
      ++a.counts[bucket_name(s.meta[a.axis])];
      ++a.total;
    }
  }
  return report;
}

/// Plain-text table, one line per bucket.
inline std::string render_distribution(const DistributionReport& r) {
  std::string out;
  for (const auto& a : r.axes) {
    out += a.axis + " (n=" + std::to_string(a.total) + ")\n";
    for (const auto& [bucket, n] : a.counts) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-28s %8zu  %6.2f%%%s\n", bucket.c_str(), n, 100.0 * a.fraction(bucket),
                    a.fraction(bucket) > r.dominance_threshold ? "  dominant" : "");
      out += line;
    }
  }
  return out;
}

}  // namespace curate
