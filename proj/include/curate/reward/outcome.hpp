// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "curate/core/records.hpp"
#include "curate/error.hpp"

namespace curate::reward {

enum class OutcomeKind { penalty_format, penalty_repetition, accuracy };

constexpr std::string_view to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::penalty_format: return "penalty_format";
    case OutcomeKind::penalty_repetition: return "penalty_repetition";
    case OutcomeKind::accuracy: return "accuracy";
  }
  return "";
}

struct RewardOutcome {
  double value = 0;
  OutcomeKind kind = OutcomeKind::accuracy;
  std::string detail;

  bool is_penalty() const { return kind != OutcomeKind::accuracy; }
};

inline constexpr double kPenaltyValue = -1.0;

inline RewardOutcome penalty(OutcomeKind k, std::string detail) { return {kPenaltyValue, k, std::move(detail)}; }

/// 2r - 1.
inline double normalize_reward(double raw) {
  if (!(raw >= 0.0 && raw <= 1.0))
    throw Error(ErrorCode::out_of_range, "raw reward " + std::to_string(raw) + " outside [0, 1]");
  return 2.0 * raw - 1.0;
}

inline RewardOutcome accuracy(double raw, std::string detail) {
  return {normalize_reward(raw), OutcomeKind::accuracy, std::move(detail)};
}

inline Record outcome_to_record(const RewardOutcome& o) {
  Record r = Record::object();
  r["reward"] = o.value;
  r["kind"] = std::string(to_string(o.kind));
  r["detail"] = o.detail;
  return r;
}

}  // namespace curate::reward
