// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairrank/alg.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "fairrank/error.h"
#include "fairrank/metrics.h"
#include "test_support.h"

namespace fairrank {
namespace {

using ::fairrank::testing::RandomGroups;
using ::fairrank::testing::RandomIntegralSpec;
using ::fairrank::testing::RankingFromGroups;

FairnessSpec GermanSpec() {
  FairnessSpec spec;
  spec.alphas = {1, 1};
  spec.betas = {Rational(3, 20), 0};
  spec.k = 100;
  spec.epsilon = Rational(2, 5);
  return spec;
}

// alpha = (0.5, 1), beta = (0.2, 0), k = 10 with group 0 at true ranks 1-10.
struct BlocksExample {
  FairnessSpec spec;
  TrueRanking truth;
};

BlocksExample MakeBlocksExample() {
  BlocksExample ex;
  ex.spec.alphas = {Rational(1, 2), 1};
  ex.spec.betas = {Rational(1, 5), 0};
  ex.spec.k = 10;
  ex.spec.mode = FairnessMode::kBlocks;
  std::vector<GroupId> groups(20, 1);
  std::fill(groups.begin(), groups.begin() + 10, 0);
  ex.truth = RankingFromGroups(groups, 2);
  return ex;
}

// Straight evaluation of the minimum-epsilon closed form.
Rational EpsilonMinOracle(const FairnessSpec& spec) {
  Rational sum_alpha = 0;
  Rational sum_beta = 0;
  for (const Rational& a : spec.alphas) sum_alpha += a;
  for (const Rational& b : spec.betas) sum_beta += b;
  const Rational groups(static_cast<std::int64_t>(spec.num_groups()));
  Rational m = std::max(1 + groups / (sum_alpha - 1), 1 + groups / (1 - sum_beta));
  for (std::size_t l = 0; l < spec.num_groups(); ++l) {
    m = std::max(m, 1 + 2 / (spec.alphas[l] - spec.betas[l]));
  }
  return Rational(2, spec.k) * m;
}

// Literal scan: for every empty rank, recount the block and look at every
// later slot in order.
SlotRanking GreedyFillOracle(SlotRanking slots, const TrueRanking& truth,
                             const DerivedParams& params) {
  const std::size_t m = slots.size();
  const auto block = static_cast<std::size_t>(params.block_size);
  const std::size_t groups = truth.num_groups();
  for (std::size_t j = 1; j <= m; ++j) {
    if (!slots.IsEmpty(j)) continue;
    const std::size_t first = (j - 1) / block * block + 1;
    const std::size_t last = std::min(m, first + block - 1);
    std::vector<std::int64_t> count(groups, 0);
    for (std::size_t r = first; r <= last; ++r) {
      if (!slots.IsEmpty(r)) ++count[truth.items()[slots.At(r)].group];
    }
    bool floors_met = true;
    for (std::size_t g = 0; g < groups; ++g) {
      floors_met = floors_met && count[g] >= params.block_lower[g];
    }
    for (std::size_t r = j + 1; r <= m; ++r) {
      if (slots.IsEmpty(r)) continue;
      const GroupId g = truth.items()[slots.At(r)].group;
      const std::int64_t after = count[g] + (r <= last ? 0 : 1);
      if (count[g] < params.block_lower[g] ||
          (floors_met && after <= params.block_upper[g])) {
        slots.Set(j, slots.At(r));
        slots.Clear(r);
        break;
      }
    }
  }
  return slots;
}

std::vector<std::size_t> Raw(const SlotRanking& slots) {
  return {slots.raw().begin(), slots.raw().end()};
}

std::vector<std::size_t> TrueRanks(const FairRanking& fair, const TrueRanking& truth) {
  std::vector<std::size_t> ranks;
  for (const Item& item : fair.items) {
    for (std::size_t r = 1; r <= truth.size(); ++r) {
      if (truth.AtRank(r).id == item.id) ranks.push_back(r);
    }
  }
  return ranks;
}

TEST(MinimumEpsilonTest, GermanCreditValue) {
  // (2/100) * max{3, 1 + 2/0.85, 1 + 2/0.85} = (2/100) * (57/17).
  const std::optional<Rational> eps = MinimumEpsilon(GermanSpec());
  ASSERT_TRUE(eps.has_value());
  EXPECT_EQ(*eps, Rational(57, 850));
  EXPECT_NEAR(ToDouble(*eps), 0.0671, 1e-4);
}

TEST(MinimumEpsilonTest, MatchesIndependentFormulaOnRandomSpecs) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const std::size_t groups = 2 + t % 3;
    const auto k = static_cast<std::int64_t>(groups) + 1 + t % 40;
    const FairnessSpec spec =
        RandomIntegralSpec(rng, groups, k, FairnessMode::kConsecutiveWindows);
    EXPECT_EQ(MinimumEpsilon(spec), EpsilonMinOracle(spec)) << t;
  }
}

TEST(DeriveParamsTest, GermanCredit) {
  const FairnessSpec spec = GermanSpec();
  const std::vector<std::int64_t> sizes = {149, 851};
  const DerivedParams p = DeriveParams(spec, sizes);
  EXPECT_EQ(p.epsilon, Rational(2, 5));
  EXPECT_EQ(p.block_size, 20);
  EXPECT_EQ(p.l_star, 1u);
  EXPECT_EQ(p.items_per_block, 17);
  EXPECT_EQ(p.num_slots, (1000 * 20 + 16) / 17);
  ASSERT_TRUE(p.underranking_bound.has_value());
  EXPECT_EQ(*p.underranking_bound, Rational(5, 4));
  EXPECT_EQ(UnderrankingBound(spec, p), Rational(5, 4));
  EXPECT_EQ(p.guaranteed_prefix, 149 - 20);
  EXPECT_LE(p.items_per_block, p.block_size);
  EXPECT_GE(p.num_slots, p.num_items);
}

TEST(DeriveParamsTest, EpsilonPolicies) {
  FairnessSpec spec = GermanSpec();
  spec.epsilon = Rational(1, 100);
  const std::vector<std::int64_t> sizes = {149, 851};
  try {
    DeriveParams(spec, sizes);
    FAIL() << "expected rejection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEpsilonBelowMinimum);
  }
  spec.epsilon_policy = EpsilonPolicy::kClamp;
  DerivedParams p = DeriveParams(spec, sizes);
  EXPECT_EQ(p.epsilon, Rational(57, 850));
  EXPECT_FALSE(p.guarantees_void);
  spec.epsilon_policy = EpsilonPolicy::kForce;
  spec.epsilon = Rational(1, 20);
  p = DeriveParams(spec, sizes);
  EXPECT_EQ(p.epsilon, Rational(1, 20));
  EXPECT_EQ(p.block_size, 2);
  EXPECT_TRUE(p.guarantees_void);
  EXPECT_FALSE(p.underranking_bound.has_value());
}

TEST(DeriveParamsTest, AbsentEpsilonUsesMinimum) {
  FairnessSpec spec = GermanSpec();
  spec.epsilon.reset();
  const std::vector<std::int64_t> sizes = {149, 851};
  EXPECT_EQ(DeriveParams(spec, sizes).epsilon, Rational(57, 850));
}

TEST(DeriveParamsTest, BlocksExample) {
  const BlocksExample ex = MakeBlocksExample();
  const std::vector<std::int64_t> sizes = ex.truth.GroupSizes();
  const DerivedParams p = DeriveParams(ex.spec, sizes);
  EXPECT_EQ(p.epsilon, 2);
  EXPECT_EQ(p.block_size, 10);
  EXPECT_EQ(p.items_per_block, 5);
  EXPECT_EQ(p.num_slots, 40);
  EXPECT_EQ(UnderrankingBound(ex.spec, p), 2);
}

TEST(SpreadDownTest, BlocksExampleLayout) {
  const BlocksExample ex = MakeBlocksExample();
  const std::vector<std::int64_t> sizes = ex.truth.GroupSizes();
  const DerivedParams p = DeriveParams(ex.spec, sizes);
  const SlotRanking slots = SpreadDown(ex.truth, p);
  std::vector<std::size_t> expected_slot = {1,  2,  3,  4,  5,  11, 12, 13, 14, 15,
                                            21, 22, 23, 24, 25, 31, 32, 33, 34, 35};
  EXPECT_EQ(slots.OccupiedCount(), 20u);
  for (std::size_t r = 0; r < 20; ++r) {
    EXPECT_EQ(slots.At(expected_slot[r]), r) << "true rank " << r + 1;
  }
}

TEST(SpreadDownTest, MatchesPositionFormulaOnRandomInstances) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t * 3;
    const TrueRanking truth = RankingFromGroups(RandomGroups(rng, std::max<std::size_t>(n, 2), 2), 2);
    DerivedParams p;
    p.block_size = 1 + t % 17;
    p.items_per_block = 1 + (t * 7) % p.block_size;
    p.num_items = static_cast<std::int64_t>(truth.size());
    p.num_slots = (p.num_items * p.block_size + p.items_per_block - 1) / p.items_per_block;
    const SlotRanking slots = SpreadDown(truth, p);
    EXPECT_EQ(slots.OccupiedCount(), truth.size());
    for (std::size_t r = 1; r <= truth.size(); ++r) {
      const auto i = static_cast<std::int64_t>(r - 1);
      const auto slot = static_cast<std::size_t>(
          i / p.items_per_block * p.block_size + i % p.items_per_block + 1);
      ASSERT_EQ(slots.At(slot), r - 1);
      // Spread-phase bound: slot <= r * B / b.
      EXPECT_LE(Rational(static_cast<std::int64_t>(slot)),
                Rational(static_cast<std::int64_t>(r) * p.block_size, p.items_per_block));
    }
  }
}

TEST(SpreadDownTest, SingleItemAndEqualBlocks) {
  const TrueRanking one = RankingFromGroups({0}, 2);
  DerivedParams p;
  p.block_size = 4;
  p.items_per_block = 4;
  p.num_items = 1;
  p.num_slots = 1;
  EXPECT_EQ(SpreadDown(one, p).At(1), 0u);

  const TrueRanking truth = RankingFromGroups({0, 1, 0, 1, 1, 0, 0}, 2);
  p.num_items = 7;
  p.num_slots = 7;
  const SlotRanking slots = SpreadDown(truth, p);
  for (std::size_t r = 1; r <= 7; ++r) EXPECT_EQ(slots.At(r), r - 1);
}

TEST(GreedyFillTest, BlocksExampleHandTrace) {
  const BlocksExample ex = MakeBlocksExample();
  const std::vector<std::int64_t> sizes = ex.truth.GroupSizes();
  const DerivedParams p = DeriveParams(ex.spec, sizes);
  const SlotRanking filled = GreedyFill(SpreadDown(ex.truth, p), ex.truth, p);
  // Block 1: true ranks 1-5 then 11-15; block 2: 6-10 then 16-20.
  const std::vector<std::size_t> expected = {1,  2,  3,  4,  5,  11, 12, 13, 14, 15,
                                             6,  7,  8,  9,  10, 16, 17, 18, 19, 20};
  for (std::size_t slot = 1; slot <= 20; ++slot) {
    ASSERT_FALSE(filled.IsEmpty(slot)) << slot;
    EXPECT_EQ(filled.At(slot) + 1, expected[slot - 1]) << "slot " << slot;
  }
  for (std::size_t slot = 21; slot <= 40; ++slot) EXPECT_TRUE(filled.IsEmpty(slot));
}

TEST(GreedyFillTest, MatchesLiteralScanOnRandomInstances) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 300; ++t) {
    const std::size_t groups = 2 + t % 2;
    const auto k = std::uniform_int_distribution<std::int64_t>(
        static_cast<std::int64_t>(groups) + 1, 30)(rng);
    const FairnessMode mode =
        t % 2 == 0 ? FairnessMode::kBlocks : FairnessMode::kConsecutiveWindows;
    FairnessSpec spec = RandomIntegralSpec(rng, groups, k, mode);
    if (mode == FairnessMode::kConsecutiveWindows) {
      spec.epsilon = Rational(std::uniform_int_distribution<int>(1, 30)(rng), 10);
      spec.epsilon_policy = EpsilonPolicy::kClamp;
    }
    const auto n = std::uniform_int_distribution<std::size_t>(groups, 150)(rng);
    const TrueRanking truth = RankingFromGroups(RandomGroups(rng, n, groups), groups);
    const std::vector<std::int64_t> sizes = truth.GroupSizes();
    const DerivedParams p = DeriveParams(spec, sizes);
    const SlotRanking spread = SpreadDown(truth, p);
    const SlotRanking fast = GreedyFill(spread, truth, p);
    const SlotRanking slow = GreedyFillOracle(spread, truth, p);
    ASSERT_EQ(Raw(fast), Raw(slow)) << "instance " << t;
    // No empty rank inside the guaranteed prefix.
    for (std::int64_t r = 1; r <= std::min(p.guaranteed_prefix, p.num_slots); ++r) {
      EXPECT_FALSE(fast.IsEmpty(static_cast<std::size_t>(r))) << t << " rank " << r;
    }
  }
}

TEST(GreedyFillTest, NoEmptyRanksLeavesInputUnchanged) {
  const TrueRanking truth = RankingFromGroups({0, 1, 0, 1}, 2);
  DerivedParams p;
  p.block_size = 2;
  p.items_per_block = 2;
  p.num_items = 4;
  p.num_slots = 4;
  p.block_lower = {1, 1};
  p.block_upper = {1, 1};
  const SlotRanking spread = SpreadDown(truth, p);
  EXPECT_EQ(Raw(GreedyFill(spread, truth, p)), Raw(spread));
}

TEST(GreedyFillTest, UnmetLowerBoundPullsThatGroupFirst) {
  // One block of 4 with slots 3,4 empty; group 1 needs 1 item and its first
  // item sits behind a group 0 item that would also fit under its cap.
  const TrueRanking truth = RankingFromGroups({0, 0, 0, 1}, 2);
  DerivedParams p;
  p.block_size = 4;
  p.items_per_block = 2;
  p.num_items = 4;
  p.num_slots = 8;
  p.block_lower = {0, 1};
  p.block_upper = {4, 4};
  const SlotRanking filled = GreedyFill(SpreadDown(truth, p), truth, p);
  EXPECT_EQ(filled.At(3), 3u);  // true rank 4, group 1
  EXPECT_EQ(filled.At(4), 2u);
}

TEST(FillTailTest, Compacts) {
  const TrueRanking truth = RankingFromGroups({0, 1, 0}, 2);
  SlotRanking slots(5);
  slots.Set(1, 0);
  slots.Set(3, 1);
  slots.Set(5, 2);
  const FairRanking out = FillTail(slots, truth, 3);
  ASSERT_EQ(out.items.size(), 3u);
  EXPECT_EQ(out.items[0].id, "t1");
  EXPECT_EQ(out.items[1].id, "t2");
  EXPECT_EQ(out.items[2].id, "t3");
}

TEST(FillTailTest, MissingItemsIsAnInvariantViolation) {
  const TrueRanking truth = RankingFromGroups({0, 1, 0}, 2);
  SlotRanking slots(4);
  slots.Set(2, 0);
  try {
    FillTail(slots, truth, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInternalInvariantViolation);
  }
}

TEST(RerankTest, BlocksExampleFinalRanking) {
  BlocksExample ex = MakeBlocksExample();
  const std::vector<std::int64_t> sizes = ex.truth.GroupSizes();
  const DerivedParams p = DeriveParams(ex.spec, sizes);
  const FairRanking out =
      FillTail(GreedyFill(SpreadDown(ex.truth, p), ex.truth, p), ex.truth, 20);
  const std::vector<std::size_t> expected = {1, 2, 3, 4, 5, 11, 12, 13, 14, 15,
                                             6, 7, 8, 9, 10, 16, 17, 18, 19, 20};
  EXPECT_EQ(TrueRanks(out, ex.truth), expected);
  EXPECT_EQ(ObservedUnderranking(out.items, ex.truth), Rational(11, 6));
  EXPECT_EQ(UnderrankingAt(out.items, ex.truth, 10), Rational(11, 6));
  EXPECT_EQ(Representation(out.items, 0, {1, 10}), Rational(1, 2));
  // beta_2 = 0 is outside the block-mode preconditions.
  EXPECT_THROW(Rerank(ex.truth, ex.spec), Error);
}

TEST(RerankTest, AlreadyFairInputIsUnchanged) {
  std::vector<GroupId> groups;
  for (int i = 0; i < 40; ++i) groups.push_back(i % 2);
  const TrueRanking truth = RankingFromGroups(groups, 2);
  FairnessSpec spec;
  spec.alphas = {Rational(3, 5), Rational(3, 5)};
  spec.betas = {Rational(2, 5), Rational(2, 5)};
  spec.k = 10;
  spec.mode = FairnessMode::kBlocks;
  const AlgTrace trace = Rerank(truth, spec);
  EXPECT_EQ(trace.params.block_size, 10);
  EXPECT_EQ(trace.params.items_per_block, 6);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    EXPECT_EQ(trace.final_ranking.items[i].id, truth.items()[i].id);
  }
  EXPECT_EQ(ObservedUnderranking(trace.final_ranking.items, truth), 1);
}

TEST(RerankTest, PermutationAndWithinGroupOrderOnRandomInstances) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 200; ++t) {
    const std::size_t groups = 2 + t % 2;
    const auto k = std::uniform_int_distribution<std::int64_t>(
        static_cast<std::int64_t>(groups) + 1, 40)(rng);
    const FairnessMode mode =
        t % 2 == 0 ? FairnessMode::kBlocks : FairnessMode::kConsecutiveWindows;
    FairnessSpec spec = RandomIntegralSpec(rng, groups, k, mode);
    spec.epsilon_policy = EpsilonPolicy::kClamp;
    if (mode == FairnessMode::kConsecutiveWindows) spec.epsilon = Rational(2, 5);
    const auto n = std::uniform_int_distribution<std::size_t>(groups, 300)(rng);
    const TrueRanking truth = RankingFromGroups(RandomGroups(rng, n, groups), groups);
    const AlgTrace trace = Rerank(truth, spec);
    ASSERT_NO_THROW(CheckIsPermutation(trace.final_ranking.items, truth));
    // Ids are t<true rank>, so within-group order is numeric order.
    std::vector<std::int64_t> last(groups, 0);
    for (const Item& item : trace.final_ranking.items) {
      const std::int64_t rank = std::stoll(item.id.substr(1));
      EXPECT_GT(rank, last[item.group]);
      last[item.group] = rank;
    }
    ASSERT_TRUE(trace.params.underranking_bound.has_value());
    EXPECT_LE(ObservedUnderranking(trace.final_ranking.items, truth),
              *trace.params.underranking_bound);
    EXPECT_GE(*trace.params.underranking_bound, 1);
  }
}

TEST(RerankTest, GermanSizedInstanceMeetsLowerGuarantee) {
  std::vector<GroupId> groups(1000, 1);
  for (int i = 0; i < 150; ++i) groups[850 + i] = 0;  // protected items last
  const TrueRanking truth = RankingFromGroups(groups, 2);
  const AlgTrace trace = Rerank(truth, GermanSpec());
  EXPECT_GE(Representation(trace.final_ranking.items, 0, {1, 100}) * 100, 9);
  EXPECT_LE(ObservedUnderranking(trace.final_ranking.items, truth), Rational(5, 4));
}

}  // namespace
}  // namespace fairrank
