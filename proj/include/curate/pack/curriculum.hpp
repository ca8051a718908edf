// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/core/rng.hpp"
#include "curate/core/sample.hpp"
#include "curate/error.hpp"

namespace curate::pack {

enum class Factor {
  AlgorithmicComplexity,
  ReasoningDepth,
  EdgeCaseRichness,
  ConstraintPressure,
  ImplementationLoad,
  ConceptualAbstraction
};

inline constexpr std::array<Factor, 6> kFactors = {Factor::AlgorithmicComplexity, Factor::ReasoningDepth,
                                                   Factor::EdgeCaseRichness,      Factor::ConstraintPressure,
                                                   Factor::ImplementationLoad,    Factor::ConceptualAbstraction};

constexpr std::string_view to_string(Factor f) {
  constexpr std::array<std::string_view, 6> names = {"AlgorithmicComplexity", "ReasoningDepth",
                                                     "EdgeCaseRichness",      "ConstraintPressure",
                                                     "ImplementationLoad",    "ConceptualAbstraction"};
  return names[static_cast<std::size_t>(f)];
}

inline std::optional<Factor> parse_factor(std::string_view s) {
  for (auto f : kFactors)
    if (to_string(f) == s) return f;
  return std::nullopt;
}

using FactorWeights = std::array<double, 6>;
inline constexpr FactorWeights kUniformWeights = {1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6};

struct DifficultyInputs {
  std::map<Factor, int> sub_scores;  // may be partial
  std::optional<std::size_t> test_case_count;
  std::optional<std::size_t> statement_length;  // code points
};

struct DifficultyScore {
  double score = 1.0;
  std::array<int, 6> sub_scores{};
  std::optional<double> coarse;
  std::vector<Factor> seeded;  // sub-scores filled from the coarse estimate
};

inline int test_case_bucket(std::size_t n) {
  if (n <= 2) return 1;
  if (n <= 5) return 2;
  if (n <= 10) return 3;
  if (n <= 20) return 4;
  return 5;
}

inline int statement_length_bucket(std::size_t chars) {
  if (chars <= 300) return 1;
  if (chars <= 800) return 2;
  if (chars <= 1500) return 3;
  if (chars <= 3000) return 4;
  return 5;
}

/// Mean of the available heuristic buckets; nullopt with neither signal.
inline std::optional<double> coarse_difficulty(const DifficultyInputs& in) {
  double sum = 0;
  int n = 0;
  if (in.test_case_count) sum += test_case_bucket(*in.test_case_count), ++n;
  if (in.statement_length) sum += statement_length_bucket(*in.statement_length), ++n;
  if (n == 0) return std::nullopt;
  return sum / n;
}

inline void check_weights(const FactorWeights& w) {
  double sum = 0;
  for (double x : w) {
    if (!(x >= 0)) throw Error(ErrorCode::weights_not_normalized, "factor weights must be nonnegative");
    sum += x;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::weights_not_normalized, "factor weights sum to " + std::to_string(sum) + ", not 1");
}

/// Weighted mean of six 1..5 sub-scores. Missing sub-scores are seeded with
/// the rounded coarse estimate.
inline DifficultyScore score_code_difficulty(const DifficultyInputs& in, const FactorWeights& w = kUniformWeights) {
  check_weights(w);
  DifficultyScore out;
  out.coarse = coarse_difficulty(in);
  for (std::size_t i = 0; i < kFactors.size(); ++i) {
    auto it = in.sub_scores.find(kFactors[i]);
    if (it != in.sub_scores.end()) {
      if (it->second < 1 || it->second > 5)
        throw Error(ErrorCode::out_of_range, std::string(to_string(kFactors[i])) + " sub-score " +
                                                 std::to_string(it->second) + " outside 1..5");
      out.sub_scores[i] = it->second;
    } else {
      if (!out.coarse)
        throw Error(ErrorCode::invalid_argument, "missing sub-score " + std::string(to_string(kFactors[i])) +
                                                     " and no test count or statement length to estimate it");
      out.sub_scores[i] = static_cast<int>(std::lround(*out.coarse));
      out.seeded.push_back(kFactors[i]);
    }
  }
  double s = 0;
  for (std::size_t i = 0; i < kFactors.size(); ++i) s += w[i] * out.sub_scores[i];
  out.score = std::clamp(s, 1.0, 5.0);  // weights within 1e-9 of one can overshoot
  return out;
}

inline constexpr std::string_view kFactorsMetaKey = "difficulty_factors";
inline constexpr std::string_view kTestCountMetaKey = "test_case_count";
inline constexpr std::string_view kScoreMetaKey = "difficulty_score";

/// Sub-scores from meta, test count from meta, statement = first user turn.
inline DifficultyInputs difficulty_inputs(const Sample& s) {
  DifficultyInputs in;
  if (s.has_meta(kFactorsMetaKey)) {
    const auto& f = s.meta[std::string(kFactorsMetaKey)];
    if (!f.is_object()) throw Error(ErrorCode::invalid_argument, "sample '" + s.id + "': difficulty_factors must be an object");
    for (const auto& [k, v] : f.items()) {
      auto factor = parse_factor(k);
      if (!factor) throw Error(ErrorCode::unknown_config_key, "sample '" + s.id + "': unknown factor '" + k + "'");
      if (!v.is_number_integer())
        throw Error(ErrorCode::invalid_argument, "sample '" + s.id + "': factor '" + k + "' must be an integer");
      in.sub_scores[*factor] = v.get<int>();
    }
  }
  if (s.has_meta(kTestCountMetaKey)) {
    const auto& t = s.meta[std::string(kTestCountMetaKey)];
    if (!t.is_number_unsigned() && !(t.is_number_integer() && t.get<long long>() >= 0))
      throw Error(ErrorCode::invalid_argument, "sample '" + s.id + "': test_case_count must be a nonnegative integer");
    in.test_case_count = t.get<std::size_t>();
  }
  if (const Message* u = s.first_with_role(Role::user)) in.statement_length = text::codepoint_count(u->content);
  return in;
}

enum class DifficultyBin { VeryEasy, Easy, Medium, Difficult, VeryDifficult };
inline constexpr std::array<DifficultyBin, 5> kBins = {DifficultyBin::VeryEasy, DifficultyBin::Easy,
                                                       DifficultyBin::Medium, DifficultyBin::Difficult,
                                                       DifficultyBin::VeryDifficult};

constexpr std::string_view to_string(DifficultyBin b) {
  constexpr std::array<std::string_view, 5> names = {"VeryEasy", "Easy", "Medium", "Difficult", "VeryDifficult"};
  return names[static_cast<std::size_t>(b)];
}

inline std::optional<DifficultyBin> parse_bin(std::string_view s) {
  for (auto b : kBins)
    if (to_string(b) == s) return b;
  return std::nullopt;
}

/// [1,1.5) [1.5,2.5) [2.5,3.5) [3.5,4.5) [4.5,5]
inline DifficultyBin bin_difficulty(double score) {
  if (!(score >= 1.0 && score <= 5.0))
    throw Error(ErrorCode::out_of_range, "difficulty score " + std::to_string(score) + " outside [1, 5]");
  if (score < 1.5) return DifficultyBin::VeryEasy;
  if (score < 2.5) return DifficultyBin::Easy;
  if (score < 3.5) return DifficultyBin::Medium;
  if (score < 4.5) return DifficultyBin::Difficult;
  return DifficultyBin::VeryDifficult;
}

struct BinSelection {
  std::size_t available = 0, target = 0, selected = 0, shortfall = 0;
};

struct CurriculumResult {
  std::vector<Sample> samples;  // input order
  std::array<BinSelection, 5> bins{};
};

using BinTargets = std::map<DifficultyBin, std::size_t>;

inline BinTargets parse_bin_targets(const Record& j) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "targets must be an object of bin: count");
  BinTargets t;
  for (const auto& [k, v] : j.items()) {
    auto b = parse_bin(k);
    if (!b) throw Error(ErrorCode::unknown_config_key, "unknown difficulty bin '" + k + "'");
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw Error(ErrorCode::invalid_argument, "target for '" + k + "' must be a nonnegative integer");
    t[*b] = v.get<std::size_t>();
  }
  return t;
}

inline double read_score(const Sample& s) {
  if (!s.has_meta(kScoreMetaKey) || !s.meta[std::string(kScoreMetaKey)].is_number())
    throw Error(ErrorCode::missing_key, "sample '" + s.id + "' has no numeric difficulty_score");
  return s.meta[std::string(kScoreMetaKey)].get<double>();
}

/// Seeded sampling without replacement inside each bin. Bins without a
/// target contribute nothing. Shortfalls are reported, never borrowed.
inline CurriculumResult select_curriculum(const std::vector<Sample>& samples, const BinTargets& targets,
                                          std::uint64_t seed) {
  std::array<std::vector<std::size_t>, 5> members;
  for (std::size_t i = 0; i < samples.size(); ++i)
    members[static_cast<std::size_t>(bin_difficulty(read_score(samples[i])))].push_back(i);
  CurriculumResult out;
  std::vector<bool> keep(samples.size(), false);
  for (std::size_t b = 0; b < kBins.size(); ++b) {
    auto it = targets.find(kBins[b]);
    std::size_t want = it == targets.end() ? 0 : it->second;
    auto& sel = out.bins[b];
    sel.available = members[b].size();
    sel.target = want;
    auto rng = derive_rng(seed, b);
    auto pick = members[b];
    shuffle(pick, rng);
    sel.selected = std::min(want, pick.size());
    sel.shortfall = want - sel.selected;
    for (std::size_t k = 0; k < sel.selected; ++k) keep[pick[k]] = true;
  }
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (keep[i]) out.samples.push_back(samples[i]);
  return out;
}

inline Record curriculum_report(const CurriculumResult& r) {
  Record out = Record::object();
  Record bins = Record::array();
  for (std::size_t b = 0; b < kBins.size(); ++b) {
    const auto& s = r.bins[b];
    bins.push_back({{"bin", std::string(to_string(kBins[b]))},
                    {"available", s.available},
                    {"target", s.target},
                    {"selected", s.selected},
                    {"shortfall", s.shortfall}});
  }
  out["bins"] = std::move(bins);
  out["selected"] = r.samples.size();
  return out;
}

}  // namespace curate::pack
