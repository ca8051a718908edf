// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/math/grid.hpp"

namespace curate::math {

/// Target counts per cell. Cells without any target keep their current count.
///
/// JSON form:
///   {"default": 10,
///    "cells": [{"domain": "Algebra", "conceptual": "HighSchool", "reasoning": "Deep", "target": 40}],
///    "marginals": {"domain": {"GeometryTopology": 500}, "reasoning": {"Deep": 800}},
///    "priority_domains": ["GeometryTopology", "AppliedMathematics", "DiscreteMathematics"]}
///
/// A cell's effective target is the largest of: the default, its explicit
/// cell target, and each marginal's share (a marginal deficit is spread over
/// the slice's cells as evenly as possible, extra units going to the earliest
/// cells).
struct TargetSpec {
  std::optional<std::size_t> default_target;
  std::vector<std::pair<Cell, std::size_t>> cells;
  std::vector<std::pair<Domain, std::size_t>> domain_marginals;
  std::vector<std::pair<Conceptual, std::size_t>> conceptual_marginals;
  std::vector<std::pair<Reasoning, std::size_t>> reasoning_marginals;
  std::vector<Domain> priority_domains = {Domain::GeometryTopology, Domain::AppliedMathematics,
                                          Domain::DiscreteMathematics};
};

struct PromptStub {
  std::vector<std::string> concepts;
  std::size_t min_steps = 1;
  std::optional<std::size_t> max_steps;  // none: open-ended
};

struct PlanItem {
  Cell cell;
  std::size_t current = 0;
  std::size_t target = 0;
  std::size_t quota = 0;
  bool priority_domain = false;
  PromptStub stub;

  double deficit_fraction() const { return target == 0 ? 0.0 : static_cast<double>(quota) / static_cast<double>(target); }
};

struct SynthesisPlan {
  std::vector<PlanItem> items;  // rank order, positive quotas only

  std::size_t total_quota() const {
    std::size_t n = 0;
    for (const auto& i : items) n += i.quota;
    return n;
  }
};

namespace detail {

inline std::size_t nonneg(const Record& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw Error(ErrorCode::invalid_argument, what + " must be a nonnegative integer");
  return v.get<std::size_t>();
}

template <class E, class Parse>
E parse_or_throw(const Record& v, Parse parse, const char* axis) {
  if (!v.is_string()) throw Error(ErrorCode::unknown_cell, std::string(axis) + " must be a string");
  auto e = parse(v.get<std::string>());
  if (!e) throw Error(ErrorCode::unknown_cell, "unknown " + std::string(axis) + " '" + v.get<std::string>() + "'");
  return *e;
}

inline std::vector<std::string> stub_concepts(Domain d, Conceptual c) {
  static const std::array<std::vector<std::string>, 7> by_domain = {{
      {"polynomials", "systems of equations", "inequalities", "linear maps"},
      {"triangles", "circles", "coordinate geometry", "continuity and connectedness"},
      {"limits", "derivatives", "integrals", "series convergence"},
      {"conditional probability", "expectation", "distributions", "estimation"},
      {"optimization", "rates of change", "modeling", "numerical methods"},
      {"counting", "graphs", "number theory", "recurrences"},
      {"logic", "puzzles"},
  }};
  auto out = by_domain[static_cast<std::size_t>(d)];
  out.push_back("level: " + std::string(to_string(c)));
  return out;
}

inline PromptStub make_stub(const Cell& c) {
  PromptStub s;
  s.concepts = stub_concepts(c.domain, c.conceptual);
  switch (c.reasoning) {
    case Reasoning::Shallow: s.min_steps = 1, s.max_steps = 2; break;
    case Reasoning::Moderate: s.min_steps = 3, s.max_steps = 5; break;
    case Reasoning::Deep: s.min_steps = 6, s.max_steps = 9; break;
    case Reasoning::ExtremelyHard: s.min_steps = 10, s.max_steps = std::nullopt; break;
  }
  return s;
}

// Raises per-cell targets so the slice's total reaches `target`.
template <class InSlice>
void spread_marginal(const GridDistribution& grid, std::vector<std::size_t>& targets, std::size_t target,
                     InSlice in_slice) {
  std::vector<std::size_t> members;
  std::size_t current = 0;
  for (std::size_t i = 0; i < kCellCount; ++i)
    if (in_slice(cell_at(i))) {
      members.push_back(i);
      current += grid.cells()[i];
    }
  if (target <= current || members.empty()) return;
  std::size_t deficit = target - current;
  std::size_t base = deficit / members.size();
  std::size_t extra = deficit % members.size();
  for (std::size_t k = 0; k < members.size(); ++k) {
    std::size_t want = grid.cells()[members[k]] + base + (k < extra ? 1 : 0);
    targets[members[k]] = std::max(targets[members[k]], want);
  }
}

}  // namespace detail

inline TargetSpec parse_target_spec(const Record& j) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "target spec must be an object");
  TargetSpec t;
  for (const auto& [key, v] : j.items()) {
    if (key == "default") {
      t.default_target = detail::nonneg(v, "default");
    } else if (key == "cells") {
      if (!v.is_array()) throw Error(ErrorCode::invalid_argument, "cells must be an array");
      for (const auto& c : v) {
        if (!c.is_object() || !c.contains("domain") || !c.contains("conceptual") || !c.contains("reasoning") ||
            !c.contains("target"))
          throw Error(ErrorCode::unknown_cell, "cell target needs domain, conceptual, reasoning and target");
        for (const auto& [ck, cv] : c.items())
          if (ck != "domain" && ck != "conceptual" && ck != "reasoning" && ck != "target")
            throw Error(ErrorCode::unknown_cell, "unknown cell field '" + ck + "'");
        Cell cell{detail::parse_or_throw<Domain>(c["domain"], parse_domain, "domain"),
                  detail::parse_or_throw<Conceptual>(c["conceptual"], parse_conceptual, "conceptual level"),
                  detail::parse_or_throw<Reasoning>(c["reasoning"], parse_reasoning, "reasoning level")};
        t.cells.emplace_back(cell, detail::nonneg(c["target"], "cell target"));
      }
    } else if (key == "marginals") {
      if (!v.is_object()) throw Error(ErrorCode::invalid_argument, "marginals must be an object");
      for (const auto& [axis, m] : v.items()) {
        if (!m.is_object()) throw Error(ErrorCode::invalid_argument, "marginal '" + axis + "' must be an object");
        for (const auto& [name, n] : m.items()) {
          Record nm = name;
          if (axis == "domain")
            t.domain_marginals.emplace_back(detail::parse_or_throw<Domain>(nm, parse_domain, "domain"),
                                            detail::nonneg(n, "marginal target"));
          else if (axis == "conceptual")
            t.conceptual_marginals.emplace_back(
                detail::parse_or_throw<Conceptual>(nm, parse_conceptual, "conceptual level"),
                detail::nonneg(n, "marginal target"));
          else if (axis == "reasoning")
            t.reasoning_marginals.emplace_back(
                detail::parse_or_throw<Reasoning>(nm, parse_reasoning, "reasoning level"),
                detail::nonneg(n, "marginal target"));
          else
            throw Error(ErrorCode::unknown_cell, "unknown marginal axis '" + axis + "'");
        }
      }
    } else if (key == "priority_domains") {
      if (!v.is_array()) throw Error(ErrorCode::invalid_argument, "priority_domains must be an array");
      t.priority_domains.clear();
      for (const auto& d : v) t.priority_domains.push_back(detail::parse_or_throw<Domain>(d, parse_domain, "domain"));
    } else {
      throw Error(ErrorCode::unknown_config_key, "unknown target spec key '" + key + "'");
    }
  }
  return t;
}

/// Effective per-cell targets (see TargetSpec).
inline std::vector<std::size_t> effective_targets(const GridDistribution& grid, const TargetSpec& spec) {
  std::vector<std::size_t> targets(kCellCount, 0);
  for (std::size_t i = 0; i < kCellCount; ++i) targets[i] = spec.default_target.value_or(0);
  for (const auto& [cell, n] : spec.cells) targets[cell_index(cell)] = std::max(targets[cell_index(cell)], n);
  for (const auto& [d, n] : spec.domain_marginals)
    detail::spread_marginal(grid, targets, n, [d = d](const Cell& c) { return c.domain == d; });
  for (const auto& [k, n] : spec.conceptual_marginals)
    detail::spread_marginal(grid, targets, n, [k = k](const Cell& c) { return c.conceptual == k; });
  for (const auto& [r, n] : spec.reasoning_marginals)
    detail::spread_marginal(grid, targets, n, [r = r](const Cell& c) { return c.reasoning == r; });
  return targets;
}

/// Rank: priority domain, then undergraduate-or-higher, then deep-or-higher,
/// then larger deficit fraction, then enum order of the cell.
inline SynthesisPlan plan_gap_fill(const GridDistribution& grid, const TargetSpec& spec) {
  auto targets = effective_targets(grid, spec);
  SynthesisPlan plan;
  std::set<Domain> priority(spec.priority_domains.begin(), spec.priority_domains.end());
  for (std::size_t i = 0; i < kCellCount; ++i) {
    std::size_t current = grid.cells()[i];
    if (targets[i] <= current) continue;
    PlanItem item;
    item.cell = cell_at(i);
    item.current = current;
    item.target = targets[i];
    item.quota = targets[i] - current;
    item.priority_domain = priority.count(item.cell.domain) > 0;
    item.stub = detail::make_stub(item.cell);
    plan.items.push_back(std::move(item));
  }
  std::stable_sort(plan.items.begin(), plan.items.end(), [](const PlanItem& a, const PlanItem& b) {
    auto key = [](const PlanItem& p) {
      return std::make_tuple(!p.priority_domain, p.cell.conceptual < Conceptual::Undergraduate,
                             p.cell.reasoning < Reasoning::Deep);
    };
    if (key(a) != key(b)) return key(a) < key(b);
    // cross-multiplied to compare quota/target without rounding
    unsigned long long lhs = static_cast<unsigned long long>(a.quota) * b.target;
    unsigned long long rhs = static_cast<unsigned long long>(b.quota) * a.target;
    if (lhs != rhs) return lhs > rhs;
    return a.cell < b.cell;
  });
  return plan;
}

inline std::vector<Record> plan_to_records(const SynthesisPlan& plan) {
  std::vector<Record> out;
  std::size_t rank = 0;
  for (const auto& it : plan.items) {
    Record r = cell_to_record(it.cell);
    r["rank"] = ++rank;
    r["current"] = it.current;
    r["target"] = it.target;
    r["quota"] = it.quota;
    r["priority_domain"] = it.priority_domain;
    Record stub = Record::object();
    stub["concepts"] = it.stub.concepts;
    stub["min_steps"] = it.stub.min_steps;
    if (it.stub.max_steps) stub["max_steps"] = *it.stub.max_steps;
    else stub["max_steps"] = nullptr;
    r["stub"] = std::move(stub);
    out.push_back(std::move(r));
  }
  return out;
}

/// Adds quota placeholders per cell; used to check plan completeness.
inline GridDistribution apply_plan(GridDistribution grid, const SynthesisPlan& plan) {
  for (const auto& it : plan.items) grid.add({it.cell.domain, it.cell.conceptual, it.cell.reasoning}, it.quota);
  return grid;
}

}  // namespace curate::math
