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

#ifndef FAIRRANK_BASELINES_H_
#define FAIRRANK_BASELINES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fairrank/model.h"
#include "fairrank/rational.h"

namespace fairrank {

// Per-prefix cardinality bounds: for every group g and prefix length
// p = 1..k, lower[g][p-1] <= |group g in top p| <= upper[g][p-1].
struct PrefixConstraints {
  std::int64_t k = 0;
  std::vector<std::vector<std::int64_t>> lower;
  std::vector<std::vector<std::int64_t>> upper;

  // L = 0, U = p for every group.
  static PrefixConstraints Unconstrained(std::size_t num_groups,
                                         std::int64_t k);

  std::size_t num_groups() const { return lower.size(); }

  // Throws Error(kInvalidSpec) unless 0 <= L <= U <= p and both are
  // non-decreasing in p.
  void Validate() const;
};

// W_ij = y_i / log2(j + 1).
double PositionDiscount(std::int64_t rank);

// Sum over ranks of score / log2(rank + 1).
double DiscountedUtility(std::span<const Item> ranking);

struct DpResult {
  FairRanking ranking;  // top k only
  double utility = 0.0;
};

// Exact maximiser of DiscountedUtility over top-k rankings meeting every
// prefix bound. Items of a group are taken in true-rank order, so a state is
// the vector of per-group counts. Supports up to 3 groups, or 4 with k <= 50.
// Throws Error(kInfeasible) or Error(kStateSpaceTooLarge).
DpResult CelisDp(const TrueRanking& truth, const PrefixConstraints& constraints);

enum class BoundDirection { kLowerBound, kUpperBound };

// Protected group gets L = ceil(p k') (lower) or U = floor(p k') (upper) with
// p = p_star + delta; every other entry is slack. Throws
// Error(kOutOfRangeProportion) when p is outside [0, 1].
PrefixConstraints PrefixConstraintsFromDelta(const Rational& p_star,
                                             const Rational& delta,
                                             std::int64_t k,
                                             BoundDirection direction,
                                             std::size_t num_groups = 2,
                                             GroupId protected_group = 0);

struct FairStarRule {
  enum class Kind { kFloor, kBinomial };
  Kind kind = Kind::kFloor;
  double significance = 0.1;

  static FairStarRule Floor() { return {Kind::kFloor, 0.1}; }
  static FairStarRule Binomial(double significance = 0.1) {
    return {Kind::kBinomial, significance};
  }
};

// m(r) for r = 1..k. Floor rule: floor(p r). Binomial rule: the smallest m
// with P[Bin(r, p) <= m] >= significance.
std::vector<std::int64_t> FairStarMinimums(const Rational& p, std::int64_t k,
                                           const FairStarRule& rule);

// Greedy top-k: at rank r emit the best remaining protected item if fewer than
// m(r) protected items are placed so far, otherwise the best remaining item.
// Throws Error(kInsufficientProtectedItems).
FairRanking FairStar(const TrueRanking& truth, GroupId protected_group,
                     const Rational& p, std::int64_t k,
                     const FairStarRule& rule = FairStarRule::Floor());

}  // namespace fairrank

#endif  // FAIRRANK_BASELINES_H_
