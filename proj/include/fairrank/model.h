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

#ifndef FAIRRANK_MODEL_H_
#define FAIRRANK_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairrank/rational.h"

namespace fairrank {

// Groups are numbered 0..num_groups-1. Ranks are 1-based everywhere in the
// public API.
using GroupId = std::size_t;

struct Item {
  std::string id;
  // Merit; larger is better.
  double score = 0.0;
  GroupId group = 0;
  // Exponent of the 2^y gain used by nDCG. Loaders may normalise it to [0, 1].
  double relevance = 0.0;
};

// Item whose nDCG relevance equals its score.
Item MakeItem(std::string id, double score, GroupId group);

// The merit order the re-rankers take as input. Position i (0-based) holds the
// item with true rank i + 1.
class TrueRanking {
 public:
  TrueRanking() = default;

  // `items` must already be in rank order: distinct ids, non-increasing
  // scores, group index below `num_groups`. Throws Error(kInvalidRanking).
  TrueRanking(std::vector<Item> items, std::size_t num_groups);

  // Sorts by score, highest first; equal scores keep their input order.
  static TrueRanking FromUnsorted(std::vector<Item> items,
                                  std::size_t num_groups);

  std::span<const Item> items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  std::size_t num_groups() const { return num_groups_; }
  const Item& AtRank(std::size_t rank) const { return items_.at(rank - 1); }

  // |P_l| for every group.
  std::vector<std::int64_t> GroupSizes() const;

 private:
  std::vector<Item> items_;
  std::size_t num_groups_ = 0;
};

enum class FairnessMode {
  // Every k consecutive ranks, with (1 +/- epsilon) slack.
  kConsecutiveWindows,
  // Consecutive blocks of exactly k ranks, no slack.
  kBlocks,
};

// What DeriveParams does with a user epsilon below the minimum the
// guarantee needs.
enum class EpsilonPolicy {
  kReject,  // throw Error(kEpsilonBelowMinimum)
  kClamp,   // raise it to the minimum
  kForce,   // keep it; the guarantees are reported as void
};

struct FairnessSpec {
  std::vector<Rational> alphas;  // per-group upper proportion
  std::vector<Rational> betas;   // per-group lower proportion
  std::int64_t k = 1;
  std::optional<Rational> epsilon;
  FairnessMode mode = FairnessMode::kConsecutiveWindows;
  EpsilonPolicy epsilon_policy = EpsilonPolicy::kReject;

  std::size_t num_groups() const { return alphas.size(); }
};

enum class SpecViolationKind {
  kTooFewGroups,
  kGroupCountMismatch,
  kProportionOutOfRange,
  kNonPositiveWindow,
  kNonPositiveEpsilon,
  kBetaExceedsAlpha,
  // alpha_l == beta_l makes the minimum epsilon unbounded.
  kDegenerateBounds,
  kSumAlphaNotAboveOne,
  kSumBetaNotBelowOne,
  kNonIntegralBlockThreshold,
  kNonPositiveBlockBeta,
  kEmptyGroup,
};

std::string_view SpecViolationName(SpecViolationKind kind);

struct SpecViolation {
  SpecViolationKind kind;
  std::string message;
};

struct ValidationResult {
  std::vector<SpecViolation> violations;
  // Smallest group size; meaningful when ok().
  std::int64_t n = 0;

  bool ok() const { return violations.empty(); }
  bool Has(SpecViolationKind kind) const;
  std::string Summary() const;
};

// Checks the preconditions of the guarantee for spec.mode:
//   both modes: 2+ groups, alpha in (0,1], beta in [0,1], beta <= alpha,
//               sum(beta) < 1, every group non-empty;
//   windows:    sum(alpha) > 1 and alpha_l > beta_l;
//   blocks:     sum(alpha) >= 1, alpha_l*k and beta_l*k integral, beta_l > 0.
ValidationResult ValidateSpec(const FairnessSpec& spec,
                              std::span<const std::int64_t> group_sizes);

// Throws Error(kInvalidSpec) listing every violation.
std::int64_t ValidateSpecOrThrow(const FairnessSpec& spec,
                                 std::span<const std::int64_t> group_sizes);

// Quantities the re-ranker derives from a spec and the group sizes.
struct DerivedParams {
  // Minimum slack from the consecutive-window guarantee. Absent when the
  // formula is unbounded (possible only in block mode).
  std::optional<Rational> epsilon_min;
  // Slack actually used; 2 in block mode.
  Rational epsilon;
  std::int64_t block_size = 0;       // B = floor(epsilon * k / 2)
  std::int64_t items_per_block = 0;  // b
  std::int64_t num_slots = 0;        // M = ceil(N * B / b)
  std::int64_t num_items = 0;        // N
  std::int64_t min_group_size = 0;   // n
  // Worst-case output rank / true rank. Absent when guarantees are void.
  std::optional<Rational> underranking_bound;
  // Ranks 1..guaranteed_prefix carry the fairness guarantee.
  std::int64_t guaranteed_prefix = 0;
  // Block mode: number of leading size-k blocks that are exactly fair.
  std::int64_t guaranteed_blocks = 0;
  Rational alpha_min;
  Rational alpha_max;
  GroupId l_star = 0;  // argmin beta, lowest index on ties
  // Per-group caps and floors inside one block of size B.
  std::vector<std::int64_t> block_upper;  // floor(alpha_l * B)
  std::vector<std::int64_t> block_lower;  // ceil(beta_l * B)
  bool guarantees_void = false;
};

// Working array of M ranks. A slot is empty or holds the 0-based index of an
// item in the TrueRanking it was built from.
class SlotRanking {
 public:
  static constexpr std::size_t kEmpty = std::numeric_limits<std::size_t>::max();

  SlotRanking() = default;
  explicit SlotRanking(std::size_t num_slots) : slots_(num_slots, kEmpty) {}

  std::size_t size() const { return slots_.size(); }
  bool IsEmpty(std::size_t rank) const { return slots_[rank - 1] == kEmpty; }
  std::size_t At(std::size_t rank) const { return slots_[rank - 1]; }
  void Set(std::size_t rank, std::size_t item_index) {
    slots_[rank - 1] = item_index;
  }
  void Clear(std::size_t rank) { slots_[rank - 1] = kEmpty; }
  std::size_t OccupiedCount() const;
  std::span<const std::size_t> raw() const { return slots_; }

 private:
  std::vector<std::size_t> slots_;
};

// Output of a re-ranker: items in output rank order, no empty ranks.
struct FairRanking {
  std::vector<Item> items;

  std::size_t size() const { return items.size(); }
};

// Throws Error(kInvalidRanking) unless `ranking` holds exactly the items of
// `truth`, each once.
void CheckIsPermutation(std::span<const Item> ranking,
                        const TrueRanking& truth);

}  // namespace fairrank

#endif  // FAIRRANK_MODEL_H_
