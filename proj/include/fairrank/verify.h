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

#ifndef FAIRRANK_VERIFY_H_
#define FAIRRANK_VERIFY_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairrank/baselines.h"
#include "fairrank/model.h"
#include "fairrank/rational.h"

namespace fairrank {

struct FairnessViolation {
  enum class Kind { kAboveUpper, kBelowLower };
  Kind kind;
  std::int64_t first_rank;  // window or block, 1-based inclusive
  std::int64_t last_rank;
  GroupId group;
  std::int64_t observed;
  Rational required;
};

struct AuditReport {
  std::vector<FairnessViolation> violations;
  std::int64_t windows_checked = 0;

  bool passed() const { return violations.empty(); }
  std::string Summary(std::size_t max_lines = 10) const;
};

// Every window [i+1, i+k] inside ranks 1..prefix_len must hold at most
// alpha_l (1 + epsilon) k and at least beta_l (1 - epsilon) k items of each
// group. Throws Error(kWindowOutOfRange) if prefix_len exceeds the ranking.
AuditReport AuditConsecutive(std::span<const Item> ranking,
                             const FairnessSpec& spec, std::int64_t prefix_len,
                             const Rational& epsilon);

// Each of the first num_blocks blocks of k ranks must hold between beta_l k
// and alpha_l k items of each group, exactly.
AuditReport AuditBlocks(std::span<const Item> ranking, const FairnessSpec& spec,
                        std::int64_t num_blocks);

// Which guarantees' literal preconditions a spec meets.
struct GuaranteeRegimes {
  bool lower_bound = false;        // 0 < beta <= alpha <= 1, sum a >= 1, sum b <= 1
  bool window_guarantee = false;   // 0 <= beta <= alpha <= 1, sum a > 1, sum b < 1
  bool block_guarantee = false;    // as above, beta > 0, alpha k and beta k in Z+
};
GuaranteeRegimes ClassifySpec(const FairnessSpec& spec);

// A true ranking where all n items of the hardest group come first, followed
// by the other groups' n items each, interleaved round-robin.
struct AdversarialInstance {
  TrueRanking true_ranking;
  GroupId l_hat = 0;
  std::int64_t n = 0;
};

// l_hat = argmin_l min{alpha_l, 1 - sum_{j != l} beta_j}, lowest index on
// ties. Needs 0 <= beta <= alpha <= 1, alpha > 0, sum alpha >= 1,
// sum beta <= 1 and n >= 1; throws Error(kInvalidSpec) otherwise.
AdversarialInstance MakeAdversarialInstance(const FairnessSpec& spec,
                                            std::int64_t n);

// 1 / min{alpha_min, 1 - sum_{l != l*} beta_l}. Same preconditions.
Rational LowerBoundValue(const FairnessSpec& spec);

enum class EnumerationMethod {
  kAuto,
  // Every permutation; N <= 10.
  kPermutations,
  // Every sequence of group labels with each group's items kept in true-rank
  // order, memoised on (prefix counts, counts at the current block start).
  kGroupPatterns,
};

// Smallest underranking over all rankings whose first num_blocks blocks of
// size spec.k are exactly (alpha, beta, k) fair. Throws
// Error(kInstanceTooLarge) or Error(kNoFeasibleRanking).
Rational BruteForceMinUnderranking(
    const TrueRanking& truth, const FairnessSpec& spec,
    std::int64_t num_blocks,
    EnumerationMethod method = EnumerationMethod::kAuto);

// Largest DiscountedUtility over all top-k orderings meeting `constraints`,
// by exhaustive enumeration. N <= 8, k <= 8. Throws Error(kInstanceTooLarge)
// or Error(kInfeasible).
double BruteForceMaxUtility(const TrueRanking& truth,
                            const PrefixConstraints& constraints);

}  // namespace fairrank

#endif  // FAIRRANK_VERIFY_H_
