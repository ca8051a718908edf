// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curate {

enum class ErrorCode {
  malformed_record,
  duplicate_id,
  io,
  invalid_argument,
  not_a_code_sample,
  empty_group,
  no_tags,
  malformed_sample,
  missing_key,
  wrong_domain,
  untagged_sample,
  unknown_cell,
  judge_unavailable,
  contract_violation,
  length_mismatch,
  oversize_sample,
  empty_pool,
  zero_weights,
  out_of_range,
  weights_not_normalized,
  name_mismatch,
  shape_mismatch,
  runner_unavailable,
  unsupported_schema_feature,
  unknown_config_key,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_record: return "malformed-record";
    case ErrorCode::duplicate_id: return "duplicate-id";
    case ErrorCode::io: return "io";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::not_a_code_sample: return "not-a-code-sample";
    case ErrorCode::empty_group: return "empty-group";
    case ErrorCode::no_tags: return "no-tags";
    case ErrorCode::malformed_sample: return "malformed-sample";
    case ErrorCode::missing_key: return "missing-key";
    case ErrorCode::wrong_domain: return "wrong-domain";
    case ErrorCode::untagged_sample: return "untagged-sample";
    case ErrorCode::unknown_cell: return "unknown-cell";
    case ErrorCode::judge_unavailable: return "judge-unavailable";
    case ErrorCode::contract_violation: return "contract-violation";
    case ErrorCode::length_mismatch: return "length-mismatch";
    case ErrorCode::oversize_sample: return "oversize-sample";
    case ErrorCode::empty_pool: return "empty-pool";
    case ErrorCode::zero_weights: return "zero-weights";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::weights_not_normalized: return "weights-not-normalized";
    case ErrorCode::name_mismatch: return "name-mismatch";
    case ErrorCode::shape_mismatch: return "shape-mismatch";
    case ErrorCode::runner_unavailable: return "runner-unavailable";
    case ErrorCode::unsupported_schema_feature: return "unsupported-schema-feature";
    case ErrorCode::unknown_config_key: return "unknown-config-key";
  }
  return "unknown";
}

/// Every failure raised by the library. The code is stable and machine
/// readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  bool is_io() const noexcept { return code_ == ErrorCode::io; }

 private:
  ErrorCode code_;
};

}  // namespace curate
