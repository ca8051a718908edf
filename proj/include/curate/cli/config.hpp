// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "curate/code/pipeline.hpp"
#include "curate/math/plan.hpp"
#include "curate/pack/blend.hpp"
#include "curate/pack/curriculum.hpp"
#include "curate/pack/packing.hpp"
#include "curate/quality/triage.hpp"
#include "curate/reward/composite.hpp"

namespace curate::cli {

struct CodeSection {
  code::FileLevelThresholds thresholds;
  std::vector<std::pair<std::string, code::Language>> aliases;
  double dominance_threshold = 0.5;
  std::string tags_key = "algorithm_tags";
  std::vector<std::string> report_axes = {"language", "quality_score", "is_executable", "difficulty", "task"};
};

struct QualitySection {
  std::string judge = "rule";  // "rule" or an http:// endpoint
  quality::CriticalSet critical = quality::default_critical_set();
  int timeout_seconds = 60;
};

struct BlendSection {
  std::optional<pack::MixtureSpec> mixture;
  std::size_t batch_size = 128;
  std::optional<std::size_t> batches;
  bool reuse = false;
  std::string domain_key = "domain";
};

struct RewardSection {
  reward::PenaltyRules penalty;
  reward::AnswerFormat answer;
  reward::SchemaMode schema_mode = reward::SchemaMode::binary;
  std::optional<Record> schema;
};

/// Every setting a subcommand can read. Command-line flags take precedence.
struct PipelineConfig {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  CodeSection code;
  std::optional<Record> math_targets;
  QualitySection quality;
  std::size_t capacity = pack::kDefaultCapacity;
  BlendSection blend;
  pack::FactorWeights difficulty_weights = pack::kUniformWeights;
  std::optional<pack::BinTargets> select_targets;
  RewardSection reward;
};

namespace detail {

inline void only_keys(const Record& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "config '" + where + "' must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == k;
    if (!ok) throw Error(ErrorCode::unknown_config_key, "unknown config key '" + (where.empty() ? k : where + "." + k) + "'");
  }
}

template <class T>
T get_as(const Record& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::invalid_argument, "config '" + where + "' has the wrong type");
  }
}

inline double get_unit(const Record& j, const std::string& where) {
  if (!j.is_number()) throw Error(ErrorCode::invalid_argument, "config '" + where + "' must be a number");
  double v = j.get<double>();
  if (!(v >= 0 && v <= 1)) throw Error(ErrorCode::out_of_range, "config '" + where + "' must be in [0, 1]");
  return v;
}

inline std::size_t get_count(const Record& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw Error(ErrorCode::invalid_argument, "config '" + where + "' must be a nonnegative integer");
  return j.get<std::size_t>();
}

}  // namespace detail

inline PipelineConfig parse_config(const Record& j) {
  using detail::get_as;
  PipelineConfig c;
  detail::only_keys(j, "", {"seed", "jobs", "code", "math", "quality", "pack", "blend", "difficulty", "select", "reward"});
  if (j.contains("seed")) c.seed = detail::get_count(j["seed"], "seed");
  if (j.contains("jobs")) c.jobs = static_cast<unsigned>(std::max<std::size_t>(1, detail::get_count(j["jobs"], "jobs")));
  if (j.contains("code")) {
    const auto& s = j["code"];
    detail::only_keys(s, "code", {"thresholds", "aliases", "dominance_threshold", "tags_key", "report_axes"});
    if (s.contains("thresholds")) {
      const auto& t = s["thresholds"];
      detail::only_keys(t, "code.thresholds", {"code_ratio", "low_ratio_share", "low_quality_share", "unrelated_share"});
      auto& th = c.code.thresholds;
      if (t.contains("code_ratio")) th.code_ratio = detail::get_unit(t["code_ratio"], "code.thresholds.code_ratio");
      if (t.contains("low_ratio_share")) th.low_ratio_share = detail::get_unit(t["low_ratio_share"], "code.thresholds.low_ratio_share");
      if (t.contains("low_quality_share"))
        th.low_quality_share = detail::get_unit(t["low_quality_share"], "code.thresholds.low_quality_share");
      if (t.contains("unrelated_share")) th.unrelated_share = detail::get_unit(t["unrelated_share"], "code.thresholds.unrelated_share");
    }
    if (s.contains("aliases")) {
      if (!s["aliases"].is_object()) throw Error(ErrorCode::invalid_argument, "config 'code.aliases' must be an object");
      for (const auto& [alias, lang] : s["aliases"].items()) {
        auto l = code::parse_language(get_as<std::string>(lang, "code.aliases." + alias));
        if (!l) throw Error(ErrorCode::invalid_argument, "config 'code.aliases." + alias + "' names an unknown language");
        c.code.aliases.emplace_back(alias, *l);
      }
    }
    if (s.contains("dominance_threshold")) c.code.dominance_threshold = detail::get_unit(s["dominance_threshold"], "code.dominance_threshold");
    if (s.contains("tags_key")) c.code.tags_key = get_as<std::string>(s["tags_key"], "code.tags_key");
    if (s.contains("report_axes")) c.code.report_axes = get_as<std::vector<std::string>>(s["report_axes"], "code.report_axes");
  }
  if (j.contains("math")) {
    detail::only_keys(j["math"], "math", {"targets"});
    if (j["math"].contains("targets")) {
      math::parse_target_spec(j["math"]["targets"]);  // validate now
      c.math_targets = j["math"]["targets"];
    }
  }
  if (j.contains("quality")) {
    const auto& s = j["quality"];
    detail::only_keys(s, "quality", {"judge", "critical", "timeout_seconds"});
    if (s.contains("judge")) c.quality.judge = get_as<std::string>(s["judge"], "quality.judge");
    if (s.contains("critical")) {
      c.quality.critical.clear();
      for (const auto& x : get_as<std::vector<std::string>>(s["critical"], "quality.critical")) c.quality.critical.insert(x);
    }
    if (s.contains("timeout_seconds")) c.quality.timeout_seconds = static_cast<int>(detail::get_count(s["timeout_seconds"], "quality.timeout_seconds"));
  }
  if (j.contains("pack")) {
    detail::only_keys(j["pack"], "pack", {"capacity"});
    if (j["pack"].contains("capacity")) c.capacity = detail::get_count(j["pack"]["capacity"], "pack.capacity");
  }
  if (j.contains("blend")) {
    const auto& s = j["blend"];
    detail::only_keys(s, "blend", {"mixture", "batch_size", "batches", "reuse", "domain_key"});
    if (s.contains("mixture")) c.blend.mixture = pack::parse_mixture(s["mixture"]);
    if (s.contains("batch_size")) c.blend.batch_size = detail::get_count(s["batch_size"], "blend.batch_size");
    if (s.contains("batches")) c.blend.batches = detail::get_count(s["batches"], "blend.batches");
    if (s.contains("reuse")) c.blend.reuse = get_as<bool>(s["reuse"], "blend.reuse");
    if (s.contains("domain_key")) c.blend.domain_key = get_as<std::string>(s["domain_key"], "blend.domain_key");
  }
  if (j.contains("difficulty")) {
    detail::only_keys(j["difficulty"], "difficulty", {"weights"});
    if (j["difficulty"].contains("weights")) {
      const auto& w = j["difficulty"]["weights"];
      if (!w.is_object()) throw Error(ErrorCode::invalid_argument, "config 'difficulty.weights' must be an object");
      pack::FactorWeights fw{};
      for (const auto& [k, v] : w.items()) {
        auto f = pack::parse_factor(k);
        if (!f) throw Error(ErrorCode::unknown_config_key, "unknown config key 'difficulty.weights." + k + "'");
        fw[static_cast<std::size_t>(*f)] = get_as<double>(v, "difficulty.weights." + k);
      }
      pack::check_weights(fw);
      c.difficulty_weights = fw;
    }
  }
  if (j.contains("select")) {
    detail::only_keys(j["select"], "select", {"targets"});
    if (j["select"].contains("targets")) c.select_targets = pack::parse_bin_targets(j["select"]["targets"]);
  }
  if (j.contains("reward")) {
    const auto& s = j["reward"];
    detail::only_keys(s, "reward", {"penalty", "answer_pattern", "case_insensitive", "schema_mode", "schema"});
    if (s.contains("penalty")) {
      const auto& p = s["penalty"];
      detail::only_keys(p, "reward.penalty", {"reasoning_open", "reasoning_close", "reasoning_required", "special_tokens",
                                              "max_consecutive_special", "ngram", "ngram_max_occurrences"});
      auto& r = c.reward.penalty;
      if (p.contains("reasoning_open")) r.reasoning_open = get_as<std::string>(p["reasoning_open"], "reward.penalty.reasoning_open");
      if (p.contains("reasoning_close")) r.reasoning_close = get_as<std::string>(p["reasoning_close"], "reward.penalty.reasoning_close");
      if (p.contains("reasoning_required")) r.reasoning_required = get_as<bool>(p["reasoning_required"], "reward.penalty.reasoning_required");
      if (p.contains("special_tokens")) r.special_tokens = get_as<std::vector<std::string>>(p["special_tokens"], "reward.penalty.special_tokens");
      if (p.contains("max_consecutive_special"))
        r.max_consecutive_special = detail::get_count(p["max_consecutive_special"], "reward.penalty.max_consecutive_special");
      if (p.contains("ngram")) r.ngram = detail::get_count(p["ngram"], "reward.penalty.ngram");
      if (p.contains("ngram_max_occurrences"))
        r.ngram_max_occurrences = detail::get_count(p["ngram_max_occurrences"], "reward.penalty.ngram_max_occurrences");
    }
    if (s.contains("answer_pattern")) {
      c.reward.answer.pattern = get_as<std::string>(s["answer_pattern"], "reward.answer_pattern");
      try {
        std::regex re(c.reward.answer.pattern);
        if (re.mark_count() < 1) throw Error(ErrorCode::invalid_argument, "config 'reward.answer_pattern' needs a capture group");
      } catch (const std::regex_error&) {
        throw Error(ErrorCode::invalid_argument, "config 'reward.answer_pattern' is not a valid regex");
      }
    }
    if (s.contains("case_insensitive")) c.reward.answer.case_insensitive = get_as<bool>(s["case_insensitive"], "reward.case_insensitive");
    if (s.contains("schema_mode")) {
      auto m = get_as<std::string>(s["schema_mode"], "reward.schema_mode");
      if (m == "binary") c.reward.schema_mode = reward::SchemaMode::binary;
      else if (m == "graded") c.reward.schema_mode = reward::SchemaMode::graded;
      else throw Error(ErrorCode::invalid_argument, "config 'reward.schema_mode' must be binary or graded");
    }
    if (s.contains("schema")) {
      reward::check_schema(Record(), s["schema"]);  // rejects unsupported keywords up front
      c.reward.schema = s["schema"];
    }
  }
  return c;
}

inline PipelineConfig load_config(const std::filesystem::path& p) { return parse_config(read_json_file(p)); }

}  // namespace curate::cli
