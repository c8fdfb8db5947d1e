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

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "fairrank/error.h"

namespace fairrank {

std::optional<Rational> MinimumEpsilon(const FairnessSpec& spec) {
  const auto groups = static_cast<std::int64_t>(spec.num_groups());
  if (groups == 0 || spec.k < 1) return std::nullopt;
  const Rational sum_alpha =
      std::accumulate(spec.alphas.begin(), spec.alphas.end(), Rational(0));
  const Rational sum_beta =
      std::accumulate(spec.betas.begin(), spec.betas.end(), Rational(0));
  if (sum_alpha <= 1 || sum_beta >= 1) return std::nullopt;

  Rational worst = 1 + Rational(groups) / (sum_alpha - 1);
  worst = std::max(worst, 1 + Rational(groups) / (1 - sum_beta));
  for (std::size_t l = 0; l < spec.num_groups(); ++l) {
    const Rational gap = spec.alphas[l] - spec.betas[l];
    if (gap <= 0) return std::nullopt;
    worst = std::max(worst, 1 + 2 / gap);
  }
  return Rational(2, spec.k) * worst;
}

namespace {

GroupId ArgminBeta(const FairnessSpec& spec) {
  return static_cast<GroupId>(
      std::min_element(spec.betas.begin(), spec.betas.end()) -
      spec.betas.begin());
}

Rational SumBetaExcept(const FairnessSpec& spec, GroupId skip) {
  Rational sum = 0;
  for (std::size_t l = 0; l < spec.num_groups(); ++l) {
    if (l != skip) sum += spec.betas[l];
  }
  return sum;
}

}  // namespace

DerivedParams DeriveParams(const FairnessSpec& spec,
                           std::span<const std::int64_t> group_sizes) {
  ValidationResult validation = ValidateSpec(spec, group_sizes);
  std::erase_if(validation.violations, [](const SpecViolation& v) {
    return v.kind == SpecViolationKind::kEmptyGroup ||
           v.kind == SpecViolationKind::kNonPositiveBlockBeta;
  });
  if (!validation.ok()) {
    throw Error(ErrorCode::kInvalidSpec, validation.Summary());
  }

  DerivedParams params;
  params.num_items =
      std::accumulate(group_sizes.begin(), group_sizes.end(), std::int64_t{0});
  params.min_group_size =
      *std::min_element(group_sizes.begin(), group_sizes.end());
  params.alpha_min = *std::min_element(spec.alphas.begin(), spec.alphas.end());
  params.alpha_max = *std::max_element(spec.alphas.begin(), spec.alphas.end());
  params.l_star = ArgminBeta(spec);
  params.epsilon_min = MinimumEpsilon(spec);

  if (spec.mode == FairnessMode::kBlocks) {
    params.epsilon = 2;
    params.block_size = spec.k;
  } else {
    // Validation guarantees the minimum exists in window mode.
    const Rational minimum = *params.epsilon_min;
    Rational epsilon = spec.epsilon.value_or(minimum);
    if (epsilon < minimum) {
      switch (spec.epsilon_policy) {
        case EpsilonPolicy::kReject:
          throw Error(ErrorCode::kEpsilonBelowMinimum,
                      "epsilon " + ToString(epsilon) +
                          " is below the minimum " + ToString(minimum) +
                          " (~" + std::to_string(ToDouble(minimum)) +
                          "); pass a larger epsilon or force it to run "
                          "without guarantees");
        case EpsilonPolicy::kClamp:
          epsilon = minimum;
          break;
        case EpsilonPolicy::kForce:
          params.guarantees_void = true;
          break;
      }
    }
    params.epsilon = epsilon;
    params.block_size = Floor(epsilon * spec.k / 2);
  }

  const std::int64_t block = params.block_size;
  if (block < 1) {
    throw Error(ErrorCode::kInvalidSpec,
                "block size floor(epsilon*k/2) is " + std::to_string(block));
  }
  std::int64_t other_floors = 0;
  for (std::size_t l = 0; l < spec.num_groups(); ++l) {
    params.block_upper.push_back(Floor(spec.alphas[l] * block));
    params.block_lower.push_back(Ceil(spec.betas[l] * block));
    if (l != params.l_star) other_floors += params.block_lower.back();
  }
  params.items_per_block =
      std::min(Floor(params.alpha_min * block), block - other_floors);
  if (params.items_per_block < 1) {
    throw Error(ErrorCode::kInvalidSpec,
                "blocks of " + std::to_string(block) +
                    " ranks cannot hold any item under these bounds");
  }
  const std::int64_t b = params.items_per_block;
  params.num_slots = (params.num_items * block + b - 1) / b;

  if (!params.guarantees_void) {
    params.underranking_bound = UnderrankingBound(spec, params);
  }

  const std::int64_t n = params.min_group_size;
  if (spec.mode == FairnessMode::kBlocks) {
    params.guaranteed_blocks = Floor(Rational(n) / (params.alpha_max * spec.k));
    params.guaranteed_prefix =
        std::min(params.guaranteed_blocks * spec.k, params.num_items);
  } else {
    params.guaranteed_prefix = std::clamp(
        Floor(Rational(n) / params.alpha_max) - block, std::int64_t{0},
        params.num_items);
  }
  if (params.guarantees_void) {
    params.guaranteed_prefix = 0;
    params.guaranteed_blocks = 0;
  }
  return params;
}

Rational UnderrankingBound(const FairnessSpec& spec,
                           const DerivedParams& params) {
  const Rational others = 1 - SumBetaExcept(spec, params.l_star);
  Rational denominator;
  if (spec.mode == FairnessMode::kBlocks) {
    denominator = std::min(params.alpha_min, others);
  } else {
    const Rational block(params.block_size);
    const auto groups = static_cast<std::int64_t>(spec.num_groups());
    denominator = std::min(params.alpha_min - 1 / block,
                           others - Rational(groups - 1) / block);
  }
  if (denominator <= 0) {
    throw Error(ErrorCode::kInvalidSpec,
                "underranking bound undefined: denominator " +
                    ToString(denominator));
  }
  return 1 / denominator;
}

SlotRanking SpreadDown(const TrueRanking& truth, const DerivedParams& params) {
  const auto n = static_cast<std::int64_t>(truth.size());
  const std::int64_t b = params.items_per_block;
  const std::int64_t block = params.block_size;
  SlotRanking slots(static_cast<std::size_t>(params.num_slots));
  const std::int64_t num_chunks = (n + b - 1) / b;
  for (std::int64_t i = num_chunks; i >= 1; --i) {
    const std::int64_t count = std::min(b, n - (i - 1) * b);
    for (std::int64_t j = 1; j <= count; ++j) {
      const std::int64_t true_rank = (i - 1) * b + j;
      slots.Set(static_cast<std::size_t>((i - 1) * block + j),
                static_cast<std::size_t>(true_rank - 1));
    }
  }
  return slots;
}

SlotRanking GreedyFill(SlotRanking slots, const TrueRanking& truth,
                       const DerivedParams& params) {
  const std::size_t num_slots = slots.size();
  const std::size_t groups = truth.num_groups();
  const auto block = static_cast<std::size_t>(params.block_size);
  const std::size_t num_blocks = (num_slots + block - 1) / block;
  auto block_of = [block](std::size_t rank) { return (rank - 1) / block; };
  auto group_at = [&](std::size_t rank) {
    return truth.items()[slots.At(rank)].group;
  };

  // counts[blk * groups + g]: items of group g currently in block blk.
  std::vector<std::int64_t> counts(num_blocks * groups, 0);
  // Per group, the slots its items occupy at or after the scan position, in
  // increasing order. The nearest candidate of a group is always the front.
  std::vector<std::vector<std::size_t>> pending(groups);
  std::vector<std::size_t> head(groups, 0);
  for (std::size_t rank = 1; rank <= num_slots; ++rank) {
    if (slots.IsEmpty(rank)) continue;
    const GroupId g = group_at(rank);
    ++counts[block_of(rank) * groups + g];
    pending[g].push_back(rank);
  }

  for (std::size_t j = 1; j <= num_slots; ++j) {
    if (!slots.IsEmpty(j)) {
      ++head[group_at(j)];
      continue;
    }
    const std::size_t blk = block_of(j);
    const std::int64_t* in_block = &counts[blk * groups];
    bool floors_met = true;
    for (std::size_t g = 0; g < groups; ++g) {
      if (in_block[g] < params.block_lower[g]) floors_met = false;
    }
    std::size_t best_rank = 0;
    GroupId best_group = 0;
    for (std::size_t g = 0; g < groups; ++g) {
      if (head[g] == pending[g].size()) continue;
      const std::size_t candidate = pending[g][head[g]];
      if (best_rank != 0 && candidate > best_rank) continue;
      const std::int64_t after_move =
          in_block[g] + (block_of(candidate) == blk ? 0 : 1);
      const bool qualifies =
          in_block[g] < params.block_lower[g] ||
          (floors_met && after_move <= params.block_upper[g]);
      if (qualifies) {
        best_rank = candidate;
        best_group = g;
      }
    }
    if (best_rank == 0) continue;
    slots.Set(j, slots.At(best_rank));
    slots.Clear(best_rank);
    ++head[best_group];
    --counts[block_of(best_rank) * groups + best_group];
    ++counts[blk * groups + best_group];
  }
  return slots;
}

FairRanking FillTail(const SlotRanking& slots, const TrueRanking& truth,
                     std::int64_t num_items) {
  // Filling each empty rank with the next occupied slot is a stable
  // compaction of the occupied slots.
  FairRanking out;
  out.items.reserve(static_cast<std::size_t>(num_items));
  for (std::size_t rank = 1; rank <= slots.size(); ++rank) {
    if (std::cmp_greater_equal(out.items.size(), num_items)) break;
    if (!slots.IsEmpty(rank)) out.items.push_back(truth.items()[slots.At(rank)]);
  }
  if (std::cmp_less(out.items.size(), num_items)) {
    throw Error(ErrorCode::kInternalInvariantViolation,
                "only " + std::to_string(out.items.size()) +
                    " items left for " + std::to_string(num_items) + " ranks");
  }
  return out;
}

AlgTrace Rerank(const TrueRanking& truth, const FairnessSpec& spec) {
  const std::vector<std::int64_t> sizes = truth.GroupSizes();
  ValidateSpecOrThrow(spec, sizes);
  AlgTrace trace;
  trace.params = DeriveParams(spec, sizes);
  trace.after_spread = SpreadDown(truth, trace.params);
  trace.after_fill = GreedyFill(trace.after_spread, truth, trace.params);
  trace.final_ranking = FillTail(trace.after_fill, truth, trace.params.num_items);
  return trace;
}

}  // namespace fairrank
