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

#include "fairrank/baselines.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fairrank/error.h"
#include "fairrank/verify.h"
#include "test_support.h"

namespace fairrank {
namespace {

using ::fairrank::testing::RandomGroups;
using ::fairrank::testing::RankingFromGroups;

constexpr GroupId kA = 0;
constexpr GroupId kB = 1;

// Scores (1.0, 0.9, 0.8, 0.7), groups (B, B, A, A).
TrueRanking FourItems() {
  return TrueRanking({MakeItem("i1", 1.0, kB), MakeItem("i2", 0.9, kB),
                      MakeItem("i3", 0.8, kA), MakeItem("i4", 0.7, kA)},
                     2);
}

std::vector<double> Scores(const FairRanking& r) {
  std::vector<double> out;
  for (const Item& item : r.items) out.push_back(item.score);
  return out;
}

double BinomialCdf(std::int64_t m, std::int64_t n, double p) {
  double total = 0.0;
  for (std::int64_t i = 0; i <= m; ++i) {
    double c = 1.0;
    for (std::int64_t j = 1; j <= i; ++j) c = c * static_cast<double>(n - i + j) / j;
    total += c * std::pow(p, static_cast<double>(i)) *
             std::pow(1 - p, static_cast<double>(n - i));
  }
  return total;
}

TEST(CelisDpTest, FourItemExample) {
  PrefixConstraints c = PrefixConstraints::Unconstrained(2, 4);
  for (std::int64_t p = 1; p <= 4; ++p) c.lower[kA][p - 1] = Ceil(Rational(p, 2));
  const DpResult result = CelisDp(FourItems(), c);
  EXPECT_EQ(Scores(result.ranking), (std::vector<double>{0.8, 1.0, 0.7, 0.9}));
  const double expected = 0.8 + 1.0 / std::log2(3.0) + 0.7 / 2.0 + 0.9 / std::log2(5.0);
  EXPECT_NEAR(result.utility, expected, 1e-12);
  EXPECT_NEAR(result.utility, 2.1685, 1e-4);
  EXPECT_NEAR(BruteForceMaxUtility(FourItems(), c), result.utility, 1e-12);
}

TEST(CelisDpTest, UnconstrainedReturnsTrueTopK) {
  const DpResult result = CelisDp(FourItems(), PrefixConstraints::Unconstrained(2, 3));
  EXPECT_EQ(Scores(result.ranking), (std::vector<double>{1.0, 0.9, 0.8}));
  EXPECT_NEAR(result.utility, DiscountedUtility(result.ranking.items), 1e-12);
}

TEST(CelisDpTest, InfeasibleWithoutProtectedItems) {
  const TrueRanking truth({MakeItem("a", 2, kB), MakeItem("b", 1, kB)}, 2);
  PrefixConstraints c = PrefixConstraints::Unconstrained(2, 2);
  c.lower[kA] = {1, 1};
  try {
    CelisDp(truth, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
}

TEST(CelisDpTest, KLargerThanNIsInfeasible) {
  EXPECT_THROW(CelisDp(FourItems(), PrefixConstraints::Unconstrained(2, 5)), Error);
}

TEST(CelisDpTest, TooManyGroupsIsRejected) {
  const TrueRanking truth = RankingFromGroups({0, 1, 2, 3, 4}, 5);
  try {
    CelisDp(truth, PrefixConstraints::Unconstrained(5, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStateSpaceTooLarge);
  }
}

TEST(CelisDpTest, OutputsSatisfyBoundsAndGroupOrder) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const std::size_t groups = 2 + t % 2;
    const auto n = std::uniform_int_distribution<std::size_t>(groups, 60)(rng);
    const TrueRanking truth = RankingFromGroups(RandomGroups(rng, n, groups), groups);
    const auto k = std::uniform_int_distribution<std::int64_t>(
        1, static_cast<std::int64_t>(n))(rng);
    PrefixConstraints c = PrefixConstraints::Unconstrained(groups, k);
    const Rational lo(std::uniform_int_distribution<int>(0, 4)(rng), 10);
    const Rational hi(std::uniform_int_distribution<int>(5, 10)(rng), 10);
    for (std::int64_t p = 1; p <= k; ++p) {
      c.lower[0][p - 1] = Ceil(lo * p);
      c.upper[1][p - 1] = Floor(hi * p);
    }
    DpResult result;
    try {
      result = CelisDp(truth, c);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
      continue;
    }
    ASSERT_EQ(result.ranking.items.size(), static_cast<std::size_t>(k));
    std::vector<std::int64_t> count(groups, 0);
    std::vector<double> last(groups, INFINITY);
    for (std::int64_t p = 1; p <= k; ++p) {
      const Item& item = result.ranking.items[static_cast<std::size_t>(p - 1)];
      ++count[item.group];
      EXPECT_LE(item.score, last[item.group]);
      last[item.group] = item.score;
      for (std::size_t g = 0; g < groups; ++g) {
        EXPECT_GE(count[g], c.lower[g][p - 1]);
        EXPECT_LE(count[g], c.upper[g][p - 1]);
      }
    }
  }
}

TEST(CelisDpTest, TiedScoresKeepTrueOrder) {
  std::vector<Item> items;
  for (int i = 0; i < 12; ++i) items.push_back(MakeItem("x" + std::to_string(i), 1.0, i % 3 == 0 ? 0 : 1));
  const TrueRanking truth(items, 2);
  const DpResult result = CelisDp(truth, PrefixConstraints::Unconstrained(2, 8));
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(result.ranking.items[i].id, truth.items()[i].id);
  }
}

TEST(PrefixConstraintsTest, ValidateRejectsBadMatrices) {
  PrefixConstraints c = PrefixConstraints::Unconstrained(2, 3);
  EXPECT_NO_THROW(c.Validate());
  c.lower[0] = {1, 0, 1};  // decreasing
  EXPECT_THROW(c.Validate(), Error);
  c = PrefixConstraints::Unconstrained(2, 3);
  c.upper[1][0] = 2;  // above the prefix length
  EXPECT_THROW(c.Validate(), Error);
  c = PrefixConstraints::Unconstrained(2, 3);
  c.lower[0] = {1, 1, 1};
  c.upper[0] = {0, 1, 1};  // L > U
  EXPECT_THROW(c.Validate(), Error);
}

TEST(PrefixConstraintsFromDeltaTest, Examples) {
  PrefixConstraints c = PrefixConstraintsFromDelta(Rational(3, 20), 0, 3,
                                                   BoundDirection::kLowerBound);
  EXPECT_EQ(c.lower[0], (std::vector<std::int64_t>{1, 1, 1}));
  EXPECT_EQ(c.upper[0], (std::vector<std::int64_t>{1, 2, 3}));
  EXPECT_EQ(c.lower[1], (std::vector<std::int64_t>{0, 0, 0}));

  c = PrefixConstraintsFromDelta(Rational(3, 20), Rational(-3, 20), 3,
                                 BoundDirection::kLowerBound);
  EXPECT_EQ(c.lower[0], (std::vector<std::int64_t>{0, 0, 0}));

  c = PrefixConstraintsFromDelta(Rational(1, 2), 0, 2, BoundDirection::kUpperBound);
  EXPECT_EQ(c.upper[0], (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(c.lower[0], (std::vector<std::int64_t>{0, 0}));

  try {
    PrefixConstraintsFromDelta(Rational(3, 20), Rational(-1, 5), 3,
                               BoundDirection::kLowerBound);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfRangeProportion);
  }
}

TEST(FairStarTest, FourItemExample) {
  const FairRanking out = FairStar(FourItems(), kA, Rational(1, 2), 4);
  EXPECT_EQ(Scores(out), (std::vector<double>{1.0, 0.8, 0.9, 0.7}));
  const std::vector<std::int64_t> m = FairStarMinimums(Rational(1, 2), 4, FairStarRule::Floor());
  std::int64_t count = 0;
  for (std::size_t r = 0; r < 4; ++r) {
    if (out.items[r].group == kA) ++count;
    EXPECT_GE(count, m[r]);
  }
}

TEST(FairStarTest, ZeroProportionAndAllProtectedGiveTrueOrder) {
  EXPECT_EQ(Scores(FairStar(FourItems(), kA, 0, 4)),
            (std::vector<double>{1.0, 0.9, 0.8, 0.7}));
  const TrueRanking all({MakeItem("a", 3, kA), MakeItem("b", 2, kA), MakeItem("c", 1, kA)}, 2);
  EXPECT_EQ(Scores(FairStar(all, kA, Rational(9, 10), 3)),
            (std::vector<double>{3, 2, 1}));
}

TEST(FairStarTest, InsufficientProtectedItems) {
  const TrueRanking truth({MakeItem("a", 3, kB), MakeItem("b", 2, kB), MakeItem("c", 1, kA)}, 2);
  try {
    FairStar(truth, kA, Rational(9, 10), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientProtectedItems);
  }
}

TEST(FairStarTest, FloorMinimums) {
  EXPECT_EQ(FairStarMinimums(Rational(1, 2), 5, FairStarRule::Floor()),
            (std::vector<std::int64_t>{0, 1, 1, 2, 2}));
  EXPECT_EQ(FairStarMinimums(Rational(3, 20), 7, FairStarRule::Floor()),
            (std::vector<std::int64_t>{0, 0, 0, 0, 0, 0, 1}));
}

TEST(FairStarTest, BinomialMinimumsAreSmallestQuantiles) {
  for (const Rational& q : {Rational(3, 20), Rational(3, 10), Rational(1, 2),
                            Rational(4, 5)}) {
    const double p = ToDouble(q);
    const std::vector<std::int64_t> m =
        FairStarMinimums(q, 40, FairStarRule::Binomial(0.1));
    for (std::int64_t r = 1; r <= 40; ++r) {
      const std::int64_t mr = m[static_cast<std::size_t>(r - 1)];
      EXPECT_GE(BinomialCdf(mr, r, p), 0.1 - 1e-12) << p << " " << r;
      if (mr > 0) EXPECT_LT(BinomialCdf(mr - 1, r, p), 0.1 + 1e-12) << p << " " << r;
    }
  }
  // p = 0.5, r = 10: P(X <= 2) = 56/1024 < 0.1 <= P(X <= 3) = 176/1024.
  EXPECT_EQ(FairStarMinimums(Rational(1, 2), 10, FairStarRule::Binomial(0.1))[9], 3);
}

TEST(FairStarTest, RequiresTwoGroups) {
  const TrueRanking truth = RankingFromGroups({0, 1, 2}, 3);
  EXPECT_THROW(FairStar(truth, 0, Rational(1, 3), 3), Error);
}

}  // namespace
}  // namespace fairrank
