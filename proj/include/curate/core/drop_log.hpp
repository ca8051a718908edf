// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/error.hpp"

namespace curate {

/// Fixed, ordered vocabulary of stages that may drop a sample.
enum class Stage { language, education, file_level, executability, difficulty, task, quality_gate };

constexpr std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::language: return "language";
    case Stage::education: return "education";
    case Stage::file_level: return "file_level";
    case Stage::executability: return "executability";
    case Stage::difficulty: return "difficulty";
    case Stage::task: return "task";
    case Stage::quality_gate: return "quality_gate";
  }
  return "";
}

struct DropEntry {
  std::string id;
  Stage stage;
  std::string reason;

  bool operator==(const DropEntry&) const = default;
};

class DropLog {
 public:
  /// Records a drop. A sample may be dropped at most once per stage.
  void add(std::string id, Stage stage, std::string reason) {
    if (!keys_.emplace(id, stage).second)
      throw Error(ErrorCode::invalid_argument,
                  "sample '" + id + "' already dropped at stage " + std::string(to_string(stage)));
    entries_.push_back({std::move(id), stage, std::move(reason)});
  }

  const std::vector<DropEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::size_t distinct_ids() const {
    std::set<std::string_view> ids;
    for (const auto& e : entries_) ids.insert(e.id);
    return ids.size();
  }

  std::vector<Record> to_records() const {
    std::vector<Record> out;
    for (const auto& e : entries_) {
      Record r = Record::object();
      r["id"] = e.id;
      r["stage"] = std::string(to_string(e.stage));
      r["reason"] = e.reason;
      out.push_back(std::move(r));
    }
    return out;
  }

 private:
  std::vector<DropEntry> entries_;
  std::set<std::pair<std::string, Stage>> keys_;
};

}  // namespace curate
