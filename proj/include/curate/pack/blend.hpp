// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/core/rng.hpp"
#include "curate/core/sample.hpp"
#include "curate/error.hpp"

namespace curate::pack {

/// Domain weights; names iterate in sorted order, which fixes every tie-break.
struct MixtureSpec {
  std::map<std::string, double> weights;

  /// Divides by the sum. Raw weights are often percentages that do not add to 100.
  MixtureSpec normalized() const {
    double sum = 0;
    for (const auto& [d, w] : weights) {
      if (!(w >= 0) || !std::isfinite(w))
        throw Error(ErrorCode::invalid_argument, "weight for '" + d + "' must be finite and nonnegative");
      sum += w;
    }
    if (sum <= 0) throw Error(ErrorCode::zero_weights, "mixture weights are all zero");
    MixtureSpec out;
    for (const auto& [d, w] : weights) out.weights[d] = w / sum;
    return out;
  }
};

inline MixtureSpec parse_mixture(const Record& j) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "mixture must be an object of domain: weight");
  MixtureSpec m;
  for (const auto& [d, w] : j.items()) {
    if (!w.is_number()) throw Error(ErrorCode::invalid_argument, "weight for '" + d + "' is not a number");
    m.weights[d] = w.get<double>();
  }
  return m;
}

/// Hamilton apportionment: floors, then leftover seats by largest fractional
/// part, ties to the lower index.
inline std::vector<std::size_t> largest_remainder(const std::vector<double>& weights, std::size_t seats) {
  double sum = 0;
  for (double w : weights) sum += w;
  if (sum <= 0) throw Error(ErrorCode::zero_weights, "cannot apportion over all-zero weights");
  std::vector<std::size_t> q(weights.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double e = weights[i] / sum * static_cast<double>(seats);
    q[i] = static_cast<std::size_t>(std::floor(e));
    given += q[i];
    rem.push_back({e - std::floor(e), i});
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; given < seats; ++k, ++given) ++q[rem[k % rem.size()].second];
  return q;
}

struct Batch {
  std::size_t index = 0;
  std::vector<std::pair<std::string, std::size_t>> quotas;  // domain order
  std::vector<std::string> ids;                             // grouped by domain
};

struct BlendReport {
  std::size_t batches = 0;
  std::map<std::string, std::size_t> delivered;
  std::optional<std::string> exhausted_domain;
  std::size_t exhausted_needed = 0, exhausted_remaining = 0;
};

/// Deterministic batch stream. Quotas are handed out seat by seat to the
/// domain with the largest outstanding cumulative entitlement
/// (weight x batch x batches so far, minus what it already received). The
/// first batch therefore equals largest-remainder, and later batches
/// correct the rounding drift so long-run shares track the weights.
class BatchBlender {
 public:
  BatchBlender(std::map<std::string, std::vector<std::string>> pools, const MixtureSpec& mixture,
               std::size_t batch_size, std::uint64_t seed, bool reuse = false)
      : batch_size_(batch_size), reuse_(reuse) {
    if (batch_size == 0) throw Error(ErrorCode::invalid_argument, "batch size must be positive");
    auto norm = mixture.normalized();
    std::uint64_t stream = 0;
    for (const auto& [d, w] : norm.weights) {
      ++stream;
      if (w == 0) continue;
      auto it = pools.find(d);
      if (it == pools.end() || it->second.empty())
        throw Error(ErrorCode::empty_pool, "domain '" + d + "' has weight but no samples");
      Pool p{d, w, std::move(it->second), {}, 0, derive_rng(seed, stream)};
      p.order.resize(p.ids.size());
      for (std::size_t i = 0; i < p.order.size(); ++i) p.order[i] = i;
      shuffle(p.order, p.rng);
      pools_.push_back(std::move(p));
    }
    given_.assign(pools_.size(), 0);
  }

  std::vector<std::size_t> next_quotas() const {
    std::vector<long double> owed(pools_.size());
    for (std::size_t d = 0; d < pools_.size(); ++d)
      owed[d] = static_cast<long double>(pools_[d].weight) * batch_size_ * (report_.batches + 1) -
                static_cast<long double>(given_[d]);
    std::vector<std::size_t> q(pools_.size(), 0);
    for (std::size_t seat = 0; seat < batch_size_; ++seat) {
      std::size_t best = 0;
      for (std::size_t d = 1; d < pools_.size(); ++d)
        if (owed[d] - q[d] > owed[best] - q[best]) best = d;
      ++q[best];
    }
    return q;
  }

  /// nullopt once a pool cannot cover its quota (never, with reuse).
  std::optional<Batch> next() {
    if (report_.exhausted_domain) return std::nullopt;
    auto q = next_quotas();
    if (!reuse_)
      for (std::size_t d = 0; d < pools_.size(); ++d)
        if (pools_[d].order.size() - pools_[d].cursor < q[d]) {
          report_.exhausted_domain = pools_[d].domain;
          report_.exhausted_needed = q[d];
          report_.exhausted_remaining = pools_[d].order.size() - pools_[d].cursor;
          return std::nullopt;
        }
    Batch b;
    b.index = report_.batches;
    for (std::size_t d = 0; d < pools_.size(); ++d) {
      auto& p = pools_[d];
      b.quotas.emplace_back(p.domain, q[d]);
      for (std::size_t k = 0; k < q[d]; ++k) {
        if (p.cursor == p.order.size()) {
          shuffle(p.order, p.rng);
          p.cursor = 0;
        }
        b.ids.push_back(p.ids[p.order[p.cursor++]]);
      }
      given_[d] += q[d];
      report_.delivered[p.domain] += q[d];
    }
    ++report_.batches;
    return b;
  }

  const BlendReport& report() const { return report_; }

 private:
  struct Pool {
    std::string domain;
    double weight;
    std::vector<std::string> ids;
    std::vector<std::size_t> order;
    std::size_t cursor;
    Rng rng;
  };
  std::vector<Pool> pools_;
  std::vector<std::size_t> given_;
  std::size_t batch_size_;
  bool reuse_;
  BlendReport report_;
};

/// Pools keyed by a meta field (input order preserved within a pool).
inline std::map<std::string, std::vector<std::string>> pools_by(const std::vector<Sample>& samples,
                                                                const std::string& key = "domain") {
  std::map<std::string, std::vector<std::string>> pools;
  for (const auto& s : samples) {
    if (!s.has_meta(key) || !s.meta[key].is_string())
      throw Error(ErrorCode::missing_key, "sample '" + s.id + "' has no string meta '" + key + "'");
    pools[s.meta[key].get<std::string>()].push_back(s.id);
  }
  return pools;
}

inline Record batch_to_record(const Batch& b) {
  Record r = Record::object();
  r["batch"] = b.index;
  Record q = Record::object();
  for (const auto& [d, n] : b.quotas) q[d] = n;
  r["quotas"] = std::move(q);
  r["ids"] = b.ids;
  return r;
}

inline Record blend_report_to_record(const BlendReport& rep) {
  Record r = Record::object();
  r["batches"] = rep.batches;
  Record d = Record::object();
  for (const auto& [k, n] : rep.delivered) d[k] = n;
  r["delivered"] = std::move(d);
  if (rep.exhausted_domain) {
    r["end"] = "pool-exhausted";
    r["exhausted_domain"] = *rep.exhausted_domain;
    r["needed"] = rep.exhausted_needed;
    r["remaining"] = rep.exhausted_remaining;
  } else {
    r["end"] = "batch-limit";
  }
  return r;
}

}  // namespace curate::pack
