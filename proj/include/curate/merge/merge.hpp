// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "curate/core/parallel.hpp"
#include "curate/merge/checkpoint.hpp"

namespace curate::merge {

struct MergeRatio {
  double w = 0.5;  // weight on the first checkpoint
};

/// "a:b" with nonnegative integers, not both zero.
inline MergeRatio parse_ratio(std::string_view s) {
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::invalid_argument, "ratio '" + std::string(s) + "': " + why);
  };
  auto colon = s.find(':');
  if (colon == std::string_view::npos || s.find(':', colon + 1) != std::string_view::npos) throw bad("expected a:b");
  auto num = [&](std::string_view part) {
    unsigned long long v = 0;
    if (part.empty() || part.find_first_not_of("0123456789") != std::string_view::npos) throw bad("not an integer");
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || p != part.data() + part.size()) throw bad("integer out of range");
    return v;
  };
  auto a = num(s.substr(0, colon)), b = num(s.substr(colon + 1));
  if (a == 0 && b == 0) throw bad("both sides are zero");
  return {static_cast<double>(a) / (static_cast<double>(a) + static_cast<double>(b))};
}

inline MergeRatio make_ratio(double w) {
  if (!(w >= 0 && w <= 1)) throw Error(ErrorCode::out_of_range, "merge weight must be in [0, 1]");
  return {w};
}

namespace detail {

inline void check_compatible(const Checkpoint& a, const Checkpoint& b) {
  std::set<std::string> na, nb;
  for (const auto& t : a.tensors()) na.insert(t.name);
  for (const auto& t : b.tensors()) nb.insert(t.name);
  if (na != nb) {
    std::string diff;
    for (const auto& n : na)
      if (!nb.count(n)) diff += (diff.empty() ? "" : ", ") + n + " (first only)";
    for (const auto& n : nb)
      if (!na.count(n)) diff += (diff.empty() ? "" : ", ") + n + " (second only)";
    throw Error(ErrorCode::name_mismatch, "tensor names differ: " + diff);
  }
  for (const auto& t : a.tensors())
    if (b.find(t.name)->shape != t.shape) throw Error(ErrorCode::shape_mismatch, "tensor '" + t.name + "' shapes differ");
}

}  // namespace detail

/// out = w*a + (1-w)*b in double, stored as float, in a's tensor order.
/// The endpoints copy an input verbatim.
inline Checkpoint merge_linear(const Checkpoint& a, const Checkpoint& b, MergeRatio r, unsigned jobs = 1) {
  make_ratio(r.w);
  detail::check_compatible(a, b);
  std::vector<Tensor> out(a.size());
  parallel_for(a.size(), jobs, [&](std::size_t i) {
    const Tensor& ta = a.tensors()[i];
    const Tensor& tb = *b.find(ta.name);
    Tensor t{ta.name, ta.shape, {}};
    if (r.w == 1.0) t.values = ta.values;
    else if (r.w == 0.0) t.values = tb.values;
    else {
      t.values.resize(ta.values.size());
      for (std::size_t k = 0; k < t.values.size(); ++k)
        t.values[k] = static_cast<float>(r.w * static_cast<double>(ta.values[k]) +
                                         (1.0 - r.w) * static_cast<double>(tb.values[k]));
    }
    out[i] = std::move(t);
  });
  Checkpoint c;
  for (auto& t : out) c.add(std::move(t));
  return c;
}

/// Direct weighted sum, accumulated in double. Weights must sum to 1.
inline Checkpoint merge_chain(const std::vector<Checkpoint>& cks, const std::vector<double>& weights,
                              unsigned jobs = 1) {
  if (cks.size() < 2) throw Error(ErrorCode::invalid_argument, "merge_chain needs at least two checkpoints");
  if (weights.size() != cks.size())
    throw Error(ErrorCode::length_mismatch, std::to_string(weights.size()) + " weights for " +
                                                std::to_string(cks.size()) + " checkpoints");
  double sum = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw Error(ErrorCode::out_of_range, "merge weights must be nonnegative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw Error(ErrorCode::weights_not_normalized, "merge weights must sum to 1");
  for (std::size_t k = 1; k < cks.size(); ++k) detail::check_compatible(cks[0], cks[k]);
  const auto& first = cks[0];
  std::vector<Tensor> out(first.size());
  parallel_for(first.size(), jobs, [&](std::size_t i) {
    const Tensor& t0 = first.tensors()[i];
    std::vector<const Tensor*> ts;
    for (const auto& c : cks) ts.push_back(c.find(t0.name));
    Tensor t{t0.name, t0.shape, std::vector<float>(t0.values.size())};
    for (std::size_t e = 0; e < t.values.size(); ++e) {
      double acc = 0;
      for (std::size_t k = 0; k < ts.size(); ++k)
        if (weights[k] != 0) acc += weights[k] * static_cast<double>(ts[k]->values[e]);
      t.values[e] = static_cast<float>(acc);
    }
    out[i] = std::move(t);
  });
  Checkpoint c;
  for (auto& t : out) c.add(std::move(t));
  return c;
}

}  // namespace curate::merge
