// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/quality/verdict.hpp"

namespace curate::quality {

/// Positive class = flagged invalid.
struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const Confusion&) const = default;
};

/// nullopt marks a ratio whose denominator is zero.
struct AgreementStats {
  Confusion confusion;
  std::optional<double> accuracy, precision, recall;
};

inline std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

inline AgreementStats agreement(const Confusion& c) {
  return {c, ratio(c.tp + c.tn, c.total()), ratio(c.tp, c.tp + c.fp), ratio(c.tp, c.tp + c.fn)};
}

inline Confusion confusion(const std::vector<bool>& predicted_invalid, const std::vector<bool>& gold_invalid) {
  if (predicted_invalid.size() != gold_invalid.size())
    throw Error(ErrorCode::length_mismatch, std::to_string(predicted_invalid.size()) + " predictions vs " +
                                                std::to_string(gold_invalid.size()) + " gold labels");
  Confusion c;
  for (std::size_t i = 0; i < gold_invalid.size(); ++i) {
    bool p = predicted_invalid[i], g = gold_invalid[i];
    (p ? (g ? c.tp : c.fp) : (g ? c.fn : c.tn))++;
  }
  return c;
}

inline AgreementStats agreement(const std::vector<QualityVerdict>& predictions, const std::vector<bool>& gold_invalid) {
  std::vector<bool> pred;
  pred.reserve(predictions.size());
  for (const auto& v : predictions) pred.push_back(!v.valid());
  return agreement(confusion(pred, gold_invalid));
}

inline Record agreement_to_record(const AgreementStats& s) {
  auto opt = [](const std::optional<double>& v) { return v ? Record(*v) : Record(nullptr); };
  Record r = Record::object();
  r["tp"] = s.confusion.tp;
  r["fp"] = s.confusion.fp;
  r["fn"] = s.confusion.fn;
  r["tn"] = s.confusion.tn;
  r["accuracy"] = opt(s.accuracy);
  r["precision"] = opt(s.precision);
  r["recall"] = opt(s.recall);
  return r;
}

}  // namespace curate::quality
