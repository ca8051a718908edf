// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/math/meta.hpp"

namespace curate::math {

struct Cell {
  Domain domain;
  Conceptual conceptual;
  Reasoning reasoning;
  bool operator==(const Cell&) const = default;
  auto operator<=>(const Cell&) const = default;
};

inline constexpr std::size_t kCellCount = kDomains.size() * kConceptual.size() * kReasoning.size();

inline std::size_t cell_index(const Cell& c) {
  return (static_cast<std::size_t>(c.domain) * kConceptual.size() + static_cast<std::size_t>(c.conceptual)) *
             kReasoning.size() +
         static_cast<std::size_t>(c.reasoning);
}

inline Cell cell_at(std::size_t i) {
  Reasoning r = static_cast<Reasoning>(i % kReasoning.size());
  i /= kReasoning.size();
  Conceptual c = static_cast<Conceptual>(i % kConceptual.size());
  return {static_cast<Domain>(i / kConceptual.size()), c, r};
}

inline Record cell_to_record(const Cell& c) {
  Record r = Record::object();
  r["domain"] = std::string(to_string(c.domain));
  r["conceptual"] = std::string(to_string(c.conceptual));
  r["reasoning"] = std::string(to_string(c.reasoning));
  return r;
}

/// Counts over the full domain x conceptual x reasoning cube. Marginals are
/// derived on demand, so they can never disagree with the cells.
class GridDistribution {
 public:
  GridDistribution() { cells_.fill(0); }

  void add(const MathMeta& m, std::size_t n = 1) { cells_[cell_index({m.domain, m.conceptual, m.reasoning})] += n; }
  std::size_t count(const Cell& c) const { return cells_[cell_index(c)]; }
  const std::array<std::size_t, kCellCount>& cells() const { return cells_; }

  std::size_t total() const {
    std::size_t n = 0;
    for (auto v : cells_) n += v;
    return n;
  }

  std::size_t domain_total(Domain d) const { return sum([&](const Cell& c) { return c.domain == d; }); }
  std::size_t conceptual_total(Conceptual k) const { return sum([&](const Cell& c) { return c.conceptual == k; }); }
  std::size_t reasoning_total(Reasoning r) const { return sum([&](const Cell& c) { return c.reasoning == r; }); }
  std::size_t domain_conceptual(Domain d, Conceptual k) const {
    return sum([&](const Cell& c) { return c.domain == d && c.conceptual == k; });
  }
  std::size_t domain_reasoning(Domain d, Reasoning r) const {
    return sum([&](const Cell& c) { return c.domain == d && c.reasoning == r; });
  }
  std::size_t conceptual_reasoning(Conceptual k, Reasoning r) const {
    return sum([&](const Cell& c) { return c.conceptual == k && c.reasoning == r; });
  }

  void merge(const GridDistribution& o) {
    for (std::size_t i = 0; i < kCellCount; ++i) cells_[i] += o.cells_[i];
  }

  bool operator==(const GridDistribution&) const = default;

  Record to_record() const {
    Record r = Record::object();
    r["total"] = total();
    Record cells = Record::array();
    for (std::size_t i = 0; i < kCellCount; ++i) {
      Record c = cell_to_record(cell_at(i));
      c["count"] = cells_[i];
      cells.push_back(std::move(c));
    }
    r["cells"] = std::move(cells);
    Record dom = Record::object();
    for (auto d : kDomains) dom[std::string(to_string(d))] = domain_total(d);
    Record con = Record::object();
    for (auto k : kConceptual) con[std::string(to_string(k))] = conceptual_total(k);
    Record rea = Record::object();
    for (auto x : kReasoning) rea[std::string(to_string(x))] = reasoning_total(x);
    r["marginals"] = {{"domain", dom}, {"conceptual", con}, {"reasoning", rea}};
    Record dc = Record::object();
    for (auto d : kDomains)
      for (auto k : kConceptual)
        dc[std::string(to_string(d)) + "/" + std::string(to_string(k))] = domain_conceptual(d, k);
    Record dr = Record::object();
    for (auto d : kDomains)
      for (auto x : kReasoning)
        dr[std::string(to_string(d)) + "/" + std::string(to_string(x))] = domain_reasoning(d, x);
    Record cr = Record::object();
    for (auto k : kConceptual)
      for (auto x : kReasoning)
        cr[std::string(to_string(k)) + "/" + std::string(to_string(x))] = conceptual_reasoning(k, x);
    r["pair_marginals"] = {{"domain_conceptual", dc}, {"domain_reasoning", dr}, {"conceptual_reasoning", cr}};
    return r;
  }

 private:
  template <class Pred>
  std::size_t sum(Pred p) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < kCellCount; ++i)
      if (p(cell_at(i))) n += cells_[i];
    return n;
  }

  std::array<std::size_t, kCellCount> cells_;
};

inline GridDistribution grid_distribution(const std::vector<Sample>& samples) {
  GridDistribution g;
  for (const auto& s : samples) {
    auto m = read_math_meta(s);
    if (!m) throw Error(ErrorCode::untagged_sample, "sample '" + s.id + "' has no complete math tags");
    g.add(*m);
  }
  return g;
}

}  // namespace curate::math
