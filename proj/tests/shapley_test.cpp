// Copyright 2026 The divminer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "divminer/shapley.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "divminer/error.hpp"
#include "test_support.hpp"

namespace divminer {
namespace {

using testing::BruteForce;
using testing::random_synthetic;
using testing::Synthetic;

// Result over two attributes with the given divergences for {a}, {b}, {a,b}.
MiningResult pair_result(double a, double b, double ab) {
  auto dictionary = testing::make_dictionary({2, 2});
  std::vector<ItemsetRecord> records(4);
  records[1].itemset = Itemset({0});
  records[1].divergence = a;
  records[2].itemset = Itemset({2});
  records[2].divergence = b;
  records[3].itemset = Itemset({0, 2});
  records[3].divergence = ab;
  return MiningResult(dictionary, records, {});
}

TEST(Shapley, PairGame) {
  const auto result = pair_result(0.2, 0.1, 0.4);
  const auto attribution = shapley(Itemset({0, 2}), result);
  ASSERT_EQ(attribution.contributions.size(), 2u);
  EXPECT_EQ(attribution.contributions[0].first, 0u);
  EXPECT_NEAR(attribution.contributions[0].second, 0.25, 1e-15);
  EXPECT_NEAR(attribution.contributions[1].second, 0.15, 1e-15);
  EXPECT_NEAR(attribution.divergence, 0.4, 1e-15);
  EXPECT_LT(attribution.residual, 1e-15);
}

TEST(Shapley, SingletonGetsItsDivergence) {
  const auto result = pair_result(-0.3, 0.1, 0.4);
  const auto attribution = shapley(Itemset({0}), result);
  EXPECT_EQ(attribution.contributions[0].second, -0.3);
}

TEST(Shapley, EmptyItemset) {
  const auto attribution = shapley(Itemset(), pair_result(0.1, 0.1, 0.1));
  EXPECT_TRUE(attribution.contributions.empty());
  EXPECT_EQ(attribution.divergence, 0.0);
}

TEST(Shapley, MissingSubsetIsReported) {
  auto dictionary = testing::make_dictionary({2, 2});
  std::vector<ItemsetRecord> records(3);
  records[1].itemset = Itemset({0});
  records[2].itemset = Itemset({0, 2});
  const MiningResult result(dictionary, records, {});
  try {
    shapley(Itemset({0, 2}), result);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingSubset);
    EXPECT_NE(std::string(e.what()).find("a1=0"), std::string::npos);
  }
}

TEST(Shapley, EfficiencyAndPermutationOracle) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 15; ++trial) {
    const Synthetic s = random_synthetic(rng, 200, 6, 3, 0.1);
    MineOptions options;
    options.threshold = 1.5 / static_cast<double>(s.values.size());
    const auto result = mine(s.dataset(), OutcomeVector(s.outcome), options);
    const BruteForce oracle(s, 2);
    for (const auto& record : result.records()) {
      if (std::isnan(record.divergence)) continue;
      const auto attribution = shapley(record.itemset, result);
      double total = 0.0;
      for (const auto& [item, value] : attribution.contributions) total += value;
      EXPECT_NEAR(total, record.divergence, 1e-9);

      const std::vector<ItemId> ids(record.itemset.items().begin(), record.itemset.items().end());
      const auto expected = oracle.permutation_shapley(ids);
      bool finite = std::all_of(expected.begin(), expected.end(),
                                [](double v) { return std::isfinite(v); });
      if (!finite) continue;
      for (size_t i = 0; i < ids.size(); ++i) {
        EXPECT_NEAR(attribution.contributions[i].second, expected[i], 1e-9);
      }
    }
  }
}

TEST(Shapley, DuplicatedColumnsShareEqually) {
  std::mt19937_64 rng(12);
  Synthetic s = random_synthetic(rng, 200, 4, 3, 0.1);
  // The last attribute duplicates attribute 0 (same domain, same values).
  std::vector<uint32_t> domains;
  for (const auto& a : s.dictionary->attributes()) domains.push_back(a.domain_size);
  domains.push_back(domains[0]);
  s.dictionary = testing::make_dictionary(domains);
  for (auto& row : s.values) row.push_back(row[0]);
  MineOptions options;
  options.threshold = 0.01;
  const auto result = mine(s.dataset(), OutcomeVector(s.outcome), options);
  const ItemId first_dup = s.dictionary->attributes().back().first_item;
  size_t checked = 0;
  for (const auto& record : result.records()) {
    if (std::isnan(record.divergence)) continue;
    for (uint32_t v = 0; v < domains[0]; ++v) {
      const ItemId x = s.dictionary->item_id(0, v);
      const ItemId y = first_dup + v;
      if (!record.itemset.contains(x) || !record.itemset.contains(y)) continue;
      const auto attribution = shapley(record.itemset, result);
      double cx = 0, cy = 0;
      for (const auto& [item, value] : attribution.contributions) {
        if (item == x) cx = value;
        if (item == y) cy = value;
      }
      EXPECT_NEAR(cx, cy, 1e-9);
      ++checked;
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Shapley, DummyItemGetsZero) {
  // The last attribute is constant, so adding its item never changes the subgroup.
  std::mt19937_64 rng(21);
  Synthetic s = random_synthetic(rng, 150, 3, 3, 0.1);
  std::vector<uint32_t> domains;
  for (const auto& a : s.dictionary->attributes()) domains.push_back(a.domain_size);
  domains.push_back(2);
  s.dictionary = testing::make_dictionary(domains);
  for (auto& row : s.values) row.push_back(0);
  MineOptions options;
  options.threshold = 0.01;
  const auto result = mine(s.dataset(), OutcomeVector(s.outcome), options);
  const ItemId dummy = s.dictionary->attributes().back().first_item;
  size_t checked = 0;
  for (const auto& record : result.records()) {
    if (!record.itemset.contains(dummy) || std::isnan(record.divergence)) continue;
    for (const auto& [item, value] : shapley(record.itemset, result).contributions) {
      if (item == dummy) {
        EXPECT_NEAR(value, 0.0, 1e-9);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Shapley, SelectionParsing) {
  const auto d = testing::make_dictionary({2, 2});
  const auto top = std::get<TopSelection>(parse_shapley_selection(*d, "top3-negative"));
  EXPECT_EQ(top.k, 3u);
  EXPECT_EQ(top.sign, Sign::kNegative);
  const auto set = std::get<Itemset>(parse_shapley_selection(*d, "itemset:a1=0, a0=1"));
  EXPECT_EQ(set, Itemset({1, 2}));
  for (const char* bad : {"top-positive", "topx-positive", "top1-up", "itemset:zz=1", "all"}) {
    EXPECT_THROW(parse_shapley_selection(*d, bad), Error) << bad;
  }
}

TEST(Shapley, BatchClampsAndHandlesEmptySelection) {
  const auto result = pair_result(0.2, 0.1, 0.4);
  EXPECT_TRUE(shapley_batch(result, TopSelection{0, Sign::kPositive}).empty());
  EXPECT_EQ(shapley_batch(result, TopSelection{100, Sign::kAbsolute}).size(), 3u);
  const auto one = shapley_batch(result, Itemset({2}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].divergence, 0.1);
}

}  // namespace
}  // namespace divminer
