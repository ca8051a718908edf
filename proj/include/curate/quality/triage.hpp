// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "curate/core/drop_log.hpp"
#include "curate/core/parallel.hpp"
#include "curate/core/records.hpp"
#include "curate/quality/judge.hpp"

namespace curate::quality {

enum class TriageLabel { Pass, Review, Reject };

constexpr std::string_view to_string(TriageLabel t) {
  switch (t) {
    case TriageLabel::Pass: return "Pass";
    case TriageLabel::Review: return "Review";
    case TriageLabel::Reject: return "Reject";
  }
  return "";
}

using CriticalSet = std::set<std::string, std::less<>>;

inline CriticalSet default_critical_set() {
  return {std::string(kSafetyBalance), std::string(kHonestyTransparency), std::string(kRoleConsistency),
          std::string(kResponseConsistency)};
}

/// JSON array of category strings, or one category per line.
inline CriticalSet parse_critical_set(const std::string& contents) {
  CriticalSet out;
  std::string_view t = text::trim(contents);
  if (!t.empty() && t.front() == '[') {
    Record j = parse_json_text(std::string(t), "critical set");
    for (const auto& c : j) {
      if (!c.is_string()) throw Error(ErrorCode::invalid_argument, "critical set entries must be strings");
      out.insert(c.get<std::string>());
    }
    return out;
  }
  for (auto line : text::split_lines(contents))
    if (!text::is_blank(line)) out.emplace(text::trim(line));
  return out;
}

inline CriticalSet load_critical_set(const std::filesystem::path& path) { return parse_critical_set(read_file(path)); }

/// Unknown categories are treated as minor; one warning per unknown label.
inline TriageLabel triage(const QualityVerdict& v, const CriticalSet& critical = default_critical_set(),
                          std::vector<std::string>* warnings = nullptr) {
  if (v.valid()) return TriageLabel::Pass;
  bool reject = false;
  for (const auto& i : v.issues()) {
    if (critical.count(i.category)) reject = true;
    else if (warnings && !is_known_category(i.category))
      warnings->push_back("unknown issue category '" + i.category + "' treated as minor");
  }
  return reject ? TriageLabel::Reject : TriageLabel::Review;
}

struct GateResult {
  std::vector<Sample> samples;  // Pass and Review, input order
  std::vector<std::string> review;
  DropLog drops;                // Reject
  std::vector<std::string> warnings;
  std::size_t pass = 0;
};

inline constexpr std::string_view kQualityMetaKey = "quality";

/// Judges every sample, records verdict and label in meta, drops Reject.
/// A judge-unavailable failure aborts the whole run and leaves input intact.
inline GateResult run_quality_gate(const std::vector<Sample>& in, const Judge& judge,
                                   const CriticalSet& critical = default_critical_set(), unsigned jobs = 1) {
  std::vector<std::optional<Assessment>> assessed(in.size());
  parallel_for(in.size(), jobs, [&](std::size_t i) { assessed[i] = assess(in[i], judge); });
  GateResult out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    auto& a = *assessed[i];
    for (auto& w : a.warnings) out.warnings.push_back(std::move(w));
    std::vector<std::string> tw;
    auto label = triage(a.verdict, critical, &tw);
    for (auto& w : tw) out.warnings.push_back("sample '" + in[i].id + "': " + w);
    if (label == TriageLabel::Reject) {
      std::string cats;
      for (const auto& is : a.verdict.issues())
        if (critical.count(is.category)) cats += (cats.empty() ? "" : ", ") + is.category;
      out.drops.add(in[i].id, Stage::quality_gate, "Reject: " + cats);
      continue;
    }
    Sample s = in[i];
    Meta q = Meta::object();
    q["label"] = std::string(to_string(label));
    q["verdict"] = verdict_to_record(a.verdict);
    s.meta[std::string(kQualityMetaKey)] = std::move(q);
    if (label == TriageLabel::Review) out.review.push_back(s.id);
    else ++out.pass;
    out.samples.push_back(std::move(s));
  }
  return out;
}

}  // namespace curate::quality
