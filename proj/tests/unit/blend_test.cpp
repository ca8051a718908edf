// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "curate/pack/blend.hpp"
#include "support/testing.hpp"

namespace curate::pack {
namespace {

using testing::Gen;

std::vector<std::string> ids(const std::string& prefix, std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
  return v;
}

MixtureSpec mix(std::map<std::string, double> w) { return MixtureSpec{std::move(w)}; }

TEST(LargestRemainder, StageMixtureAt128) {
  // Math 32, Code 28, STEM 21, IF 12, SO 12: exact shares 39.01 34.13 25.60 14.63 14.63
  EXPECT_EQ(largest_remainder({32, 28, 21, 12, 12}, 128), (std::vector<std::size_t>{39, 34, 25, 15, 15}));
}

TEST(LargestRemainder, TiesGoToLowerIndexAndZeroWeights) {
  EXPECT_EQ(largest_remainder({1, 1, 1}, 4), (std::vector<std::size_t>{2, 1, 1}));
  EXPECT_EQ(largest_remainder({0, 3}, 5), (std::vector<std::size_t>{0, 5}));
  EXPECT_THROW(largest_remainder({0, 0}, 4), Error);
}

TEST(LargestRemainder, SumsToSeatsAndStaysWithinOne) {
  Gen g(8);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> w;
    std::size_t n = 1 + g.index(8);
    for (std::size_t i = 0; i < n; ++i) w.push_back(g.coin(0.2) ? 0.0 : g.real(0, 100));
    if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0; })) w[0] = 1;
    std::size_t seats = g.index(300);
    auto q = largest_remainder(w, seats);
    double sum = 0;
    for (double x : w) sum += x;
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      total += q[i];
      EXPECT_LT(std::fabs(q[i] - w[i] / sum * seats), 1.0);
      if (w[i] == 0) { EXPECT_EQ(q[i], 0u); }
    }
    EXPECT_EQ(total, seats);
  }
}

TEST(Mixture, NormalizesAndRejects) {
  auto n = mix({{"a", 32}, {"b", 28}, {"c", 45}}).normalized();
  EXPECT_DOUBLE_EQ(n.weights["a"], 32.0 / 105);
  EXPECT_THROW(mix({{"a", 0}, {"b", 0}}).normalized(), Error);
  EXPECT_THROW(mix({{"a", -1}, {"b", 2}}).normalized(), Error);
  EXPECT_EQ(parse_mixture(Record::parse(R"({"x":1,"y":3})")).weights.at("y"), 3.0);
  EXPECT_THROW(parse_mixture(Record::parse(R"({"x":"heavy"})")), Error);
}

TEST(Blend, EvenHalvesInBatchOfFour) {
  BatchBlender b({{"A", ids("a", 10)}, {"B", ids("b", 10)}}, mix({{"A", .5}, {"B", .5}}), 4, 1);
  auto batch = b.next();
  ASSERT_TRUE(batch);
  EXPECT_EQ(batch->quotas, (std::vector<std::pair<std::string, std::size_t>>{{"A", 2}, {"B", 2}}));
  ASSERT_EQ(batch->ids.size(), 4u);
  EXPECT_EQ(batch->ids[0][0], 'a');
  EXPECT_EQ(batch->ids[3][0], 'b');
}

TEST(Blend, FirstBatchEqualsLargestRemainder) {
  std::map<std::string, std::vector<std::string>> pools = {
      {"Math", ids("m", 500)}, {"Code", ids("c", 500)}, {"STEM", ids("s", 500)}, {"IF", ids("i", 500)},
      {"SO", ids("o", 500)}};
  BatchBlender b(pools, mix({{"Math", 32}, {"Code", 28}, {"STEM", 21}, {"IF", 12}, {"SO", 12}}), 128, 7);
  auto batch = b.next();
  ASSERT_TRUE(batch);
  std::map<std::string, std::size_t> q(batch->quotas.begin(), batch->quotas.end());
  EXPECT_EQ(q, (std::map<std::string, std::size_t>{{"Math", 39}, {"Code", 34}, {"STEM", 25}, {"IF", 15}, {"SO", 15}}));
}

TEST(Blend, DeterministicPerSeedAndNoRepeatsWithoutReuse) {
  auto run = [](std::uint64_t seed) {
    BatchBlender b({{"A", ids("a", 30)}, {"B", ids("b", 30)}}, mix({{"A", 2}, {"B", 1}}), 6, seed);
    std::vector<std::string> all;
    while (auto batch = b.next()) all.insert(all.end(), batch->ids.begin(), batch->ids.end());
    return all;
  };
  auto x = run(5);
  EXPECT_EQ(x, run(5));
  EXPECT_NE(x, run(6));
  EXPECT_EQ(std::set<std::string>(x.begin(), x.end()).size(), x.size());
}

TEST(Blend, ZeroWeightDomainNeedsNoPool) {
  BatchBlender b({{"A", ids("a", 4)}}, mix({{"A", 1}, {"B", 0}}), 2, 1);
  auto batch = b.next();
  ASSERT_TRUE(batch);
  EXPECT_EQ(batch->ids.size(), 2u);
}

TEST(Blend, EmptyPoolAndBadBatchSize) {
  try {
    BatchBlender b({{"A", ids("a", 4)}, {"B", {}}}, mix({{"A", 1}, {"B", 1}}), 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_pool);
  }
  EXPECT_THROW(BatchBlender({{"A", ids("a", 4)}}, mix({{"A", 1}}), 0, 1), Error);
  EXPECT_THROW(BatchBlender({{"A", ids("a", 4)}}, mix({{"A", 0}}), 2, 1), Error);
}

TEST(Blend, ExhaustionEndsStreamWithReport) {
  BatchBlender b({{"A", ids("a", 5)}, {"B", ids("b", 100)}}, mix({{"A", 1}, {"B", 1}}), 4, 3);
  std::size_t n = 0;
  while (b.next()) ++n;
  EXPECT_EQ(n, 2u);
  const auto& r = b.report();
  EXPECT_EQ(r.batches, 2u);
  ASSERT_TRUE(r.exhausted_domain);
  EXPECT_EQ(*r.exhausted_domain, "A");
  EXPECT_EQ(r.exhausted_needed, 2u);
  EXPECT_EQ(r.exhausted_remaining, 1u);
  EXPECT_EQ(r.delivered.at("A"), 4u);
  EXPECT_FALSE(b.next());
  EXPECT_EQ(blend_report_to_record(r)["end"], "pool-exhausted");
}

TEST(Blend, ReuseReshufflesExhaustedPool) {
  BatchBlender b({{"A", ids("a", 3)}, {"B", ids("b", 3)}}, mix({{"A", 1}, {"B", 1}}), 2, 3, true);
  std::map<std::string, int> seen;
  for (int i = 0; i < 30; ++i) {
    auto batch = b.next();
    ASSERT_TRUE(batch);
    for (const auto& id : batch->ids) ++seen[id];
  }
  for (const auto& [id, c] : seen) EXPECT_EQ(c, 10) << id;
}

TEST(Blend, CumulativeSharesTrackWeights) {
  Gen g(77);
  for (int t = 0; t < 40; ++t) {
    std::map<std::string, double> w;
    std::map<std::string, std::vector<std::string>> pools;
    std::size_t n = 2 + g.index(5);
    for (std::size_t d = 0; d < n; ++d) {
      std::string name = "d" + std::to_string(d);
      w[name] = g.real(0.5, 40);
      pools[name] = ids(name + "-", 20);
    }
    std::size_t batch = 1 + g.index(64);
    BatchBlender b(pools, mix(w), batch, t, true);
    auto norm = mix(w).normalized();
    for (std::size_t k = 1; k <= 100; ++k) {
      ASSERT_TRUE(b.next());
      for (const auto& [d, share] : norm.weights)
        EXPECT_LE(std::fabs(b.report().delivered.at(d) - share * batch * k), 1.0 + 1e-9)
            << "domain " << d << " after " << k << " batches";
    }
  }
}

TEST(Blend, PoolsByMetaKey) {
  using testing::chat;
  auto s1 = chat("1", "q", "a", {{"domain", "Math"}});
  auto s2 = chat("2", "q", "a", {{"domain", "Code"}});
  auto s3 = chat("3", "q", "a", {{"domain", "Math"}});
  auto p = pools_by({s1, s2, s3});
  EXPECT_EQ(p["Math"], (std::vector<std::string>{"1", "3"}));
  EXPECT_THROW(pools_by({chat("4", "q", "a")}), Error);
}

}  // namespace
}  // namespace curate::pack
