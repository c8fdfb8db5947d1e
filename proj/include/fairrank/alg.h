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

#ifndef FAIRRANK_ALG_H_
#define FAIRRANK_ALG_H_

#include <cstdint>
#include <optional>
#include <span>

#include "fairrank/model.h"
#include "fairrank/rational.h"

namespace fairrank {

// Intermediate states of one Rerank call, kept for verification.
struct AlgTrace {
  SlotRanking after_spread;
  SlotRanking after_fill;
  FairRanking final_ranking;
  DerivedParams params;
};

// Smallest slack for which the consecutive-window guarantee holds:
//   (2/k) * max{1 + l/(sum alpha - 1), 1 + l/(1 - sum beta),
//               max_l 1 + 2/(alpha_l - beta_l)}.
// Absent when a denominator is zero or negative.
std::optional<Rational> MinimumEpsilon(const FairnessSpec& spec);

// Computes B, b, M, the bounds and the guaranteed prefix. Block mode forces
// epsilon = 2, so B = k. Throws Error(kInvalidSpec) when the formulas are
// undefined for `spec`, and Error(kEpsilonBelowMinimum) for a too-small
// epsilon under EpsilonPolicy::kReject.
//
// Unlike ValidateSpec this accepts empty groups and, in block mode,
// beta_l = 0; the constructions are well defined there.
DerivedParams DeriveParams(const FairnessSpec& spec,
                           std::span<const std::int64_t> group_sizes);

// Underranking guarantee for the mode:
//   windows: 1 / min{alpha_min - 1/B, (1 - sum_{l != l*} beta_l) - (l-1)/B}
//   blocks:  1 / min{alpha_min, 1 - sum_{l != l*} beta_l}
// Throws Error(kInvalidSpec) if the minimum is not positive.
Rational UnderrankingBound(const FairnessSpec& spec,
                           const DerivedParams& params);

// Moves true ranks (i-1)b+1..(i-1)b+b to slots (i-1)B+1..(i-1)B+b, so every
// block of B slots holds at most b items, all at its front.
SlotRanking SpreadDown(const TrueRanking& truth, const DerivedParams& params);

// Scans slots 1..M; each empty slot j in block i = ceil(j/B) takes the nearest
// item below it whose group l satisfies
//   count_l < ceil(beta_l B)  or
//   (every group meets its floor and the move keeps count_l <= floor(alpha_l B)),
// with counts taken inside block i. Slots with no such item stay empty.
SlotRanking GreedyFill(SlotRanking slots, const TrueRanking& truth,
                       const DerivedParams& params);

// Each empty rank j <= N takes the first occupied slot after it. Returns the
// first N slots as items. Throws Error(kInternalInvariantViolation) when
// fewer than N items are present.
FairRanking FillTail(const SlotRanking& slots, const TrueRanking& truth,
                     std::int64_t num_items);

// SpreadDown -> GreedyFill -> FillTail after full validation of `spec`
// against the ranking's group sizes.
AlgTrace Rerank(const TrueRanking& truth, const FairnessSpec& spec);

}  // namespace fairrank

#endif  // FAIRRANK_ALG_H_
