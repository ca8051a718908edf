// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curate/code/difficulty.hpp"
#include "curate/code/education.hpp"
#include "curate/code/executability.hpp"
#include "curate/code/file_filter.hpp"
#include "curate/code/language.hpp"
#include "curate/code/task.hpp"
#include "curate/core/drop_log.hpp"
#include "curate/core/parallel.hpp"
#include "curate/core/sample.hpp"

namespace curate::code {

struct CodePipelineConfig {
  AliasTable aliases;
  LanguageClassifier fallback;  // empty: signature scorer
  EducationScorer scorer;       // empty: rule-based scorer
  FileLevelThresholds thresholds;
  DifficultyTable difficulty_table;
  std::string tags_key = "algorithm_tags";
  unsigned jobs = 1;
};

struct CodePipelineResult {
  std::vector<Sample> samples;
  DropLog drops;
  std::vector<Sample> review;  // scorer failures, never silently lost
  std::vector<std::string> warnings;
  std::map<std::string, FileLevelDecision> sources;
};

namespace detail {

inline std::string internal_error(const std::exception& e) { return std::string("internal-error: ") + e.what(); }

struct StageOutcome {
  bool keep = true;
  std::string reason;
  std::vector<std::string> warnings;
};

// Runs fn over the live samples in parallel, then applies the drops in input
// order so the log is independent of scheduling.
template <class Fn>
void run_stage(std::vector<Sample>& live, DropLog& drops, std::vector<std::string>& warnings, Stage stage,
               unsigned jobs, Fn&& fn) {
  std::vector<StageOutcome> out(live.size());
  parallel_for(live.size(), jobs, [&](std::size_t i) {
    try {
      out[i] = fn(live[i]);
    } catch (const std::exception& e) {
      out[i] = {false, internal_error(e), {}};
    }
  });
  std::vector<Sample> kept;
  kept.reserve(live.size());
  for (std::size_t i = 0; i < live.size(); ++i) {
    for (auto& w : out[i].warnings) warnings.push_back(live[i].id + ": " + w);
    if (out[i].keep) kept.push_back(std::move(live[i]));
    else drops.add(live[i].id, stage, out[i].reason);
  }
  live = std::move(kept);
}

inline Language meta_language(const Sample& s) {
  return parse_language(s.meta.value("language", std::string("other"))).value_or(Language::other);
}

}  // namespace detail

/// language -> education -> file level -> executability -> difficulty -> task.
/// A failure on one sample drops that sample only.
inline CodePipelineResult run_code_pipeline(std::vector<Sample> samples, const CodePipelineConfig& cfg = {}) {
  CodePipelineResult res;
  auto& live = samples;

  detail::run_stage(live, res.drops, res.warnings, Stage::language, cfg.jobs, [&](Sample& s) {
    detail::StageOutcome o;
    try {
      s.meta["language"] = std::string(to_string(identify_language(s, cfg.aliases, cfg.fallback)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::not_a_code_sample) throw;
      o.keep = false;
      o.reason = e.what();
    }
    return o;
  });

  // Education. Scorer failures go to review; the scores of every scored
  // sample feed the file-level rule, including those dropped here.
  std::vector<std::optional<int>> scores(live.size());
  std::vector<std::string> failures(live.size());
  parallel_for(live.size(), cfg.jobs, [&](std::size_t i) {
    try {
      scores[i] = score_education(live[i], detail::meta_language(live[i]), cfg.scorer);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  std::map<std::string, std::vector<FileSignals>> by_source;
  std::vector<FileSignals> signals(live.size());
  parallel_for(live.size(), cfg.jobs, [&](std::size_t i) {
    if (scores[i]) {
      try {
        signals[i] = file_signals(live[i], detail::meta_language(live[i]), *scores[i]);
      } catch (const std::exception& e) {
        failures[i] = detail::internal_error(e);
        scores[i].reset();
      }
    }
  });
  {
    std::vector<Sample> kept;
    for (std::size_t i = 0; i < live.size(); ++i) {
      Sample& s = live[i];
      if (!scores[i]) {
        res.drops.add(s.id, Stage::education, "routed-to-review: " + failures[i]);
        res.review.push_back(s);
        continue;
      }
      by_source[s.source].push_back(signals[i]);
      if (*scores[i] <= kMaxRejectedScore) {
        res.drops.add(s.id, Stage::education, "quality_score " + std::to_string(*scores[i]));
        continue;
      }
      s.meta["quality_score"] = *scores[i];
      kept.push_back(std::move(s));
    }
    live = std::move(kept);
  }

  for (const auto& [source, group] : by_source) res.sources[source] = filter_file_level(group, cfg.thresholds);
  detail::run_stage(live, res.drops, res.warnings, Stage::file_level, 1, [&](Sample& s) {
    const auto& d = res.sources.at(s.source);
    return detail::StageOutcome{d.keep, d.keep ? "" : "source '" + s.source + "': " + d.reason, {}};
  });

  detail::run_stage(live, res.drops, res.warnings, Stage::executability, cfg.jobs, [&](Sample& s) {
    auto v = check_executability(code_content(s).primary_code(), detail::meta_language(s));
    detail::StageOutcome o;
    if (!v.executable) {
      o.keep = false;
      o.reason = std::string(to_string(v.reason));
      if (v.location) o.reason += " at " + std::to_string(v.location->line) + ":" + std::to_string(v.location->column);
      if (!v.detail.empty()) o.reason += " (" + v.detail + ")";
      return o;
    }
    s.meta["is_executable"] = true;
    return o;
  });

  detail::run_stage(live, res.drops, res.warnings, Stage::difficulty, cfg.jobs, [&](Sample& s) {
    detail::StageOutcome o;
    std::vector<std::string> tags;
    if (s.has_meta(cfg.tags_key)) {
      const auto& t = s.meta[cfg.tags_key];
      if (!t.is_array()) throw Error(ErrorCode::malformed_sample, "meta '" + cfg.tags_key + "' must be an array");
      for (const auto& x : t) {
        if (!x.is_string()) throw Error(ErrorCode::malformed_sample, "algorithm tags must be strings");
        tags.push_back(x.get<std::string>());
      }
    }
    if (tags.empty()) tags = detect_algorithm_tags(code_content(s).primary_code());
    Difficulty d = Difficulty::Easy;
    if (tags.empty()) {
      o.warnings.push_back("no algorithm tags; difficulty defaults to Easy");
    } else {
      auto label = label_difficulty(tags, cfg.difficulty_table);
      d = label.difficulty;
      for (const auto& u : label.unknown_tags) o.warnings.push_back("unknown algorithm tag '" + u + "' counted as Easy");
    }
    s.meta["difficulty"] = std::string(to_string(d));
    return o;
  });

  detail::run_stage(live, res.drops, res.warnings, Stage::task, cfg.jobs, [&](Sample& s) {
    detail::StageOutcome o;
    try {
      s.meta["task"] = std::string(to_string(classify_task(s, cfg.aliases)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::malformed_sample) throw;
      o.keep = false;
      o.reason = e.what();
    }
    return o;
  });

  res.samples = std::move(live);
  return res;
}

}  // namespace curate::code
