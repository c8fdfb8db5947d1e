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

#include "fairrank/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "fairrank/error.h"

namespace fairrank {

Item MakeItem(std::string id, double score, GroupId group) {
  return Item{std::move(id), score, group, score};
}

TrueRanking::TrueRanking(std::vector<Item> items, std::size_t num_groups)
    : items_(std::move(items)), num_groups_(num_groups) {
  std::unordered_set<std::string> seen;
  seen.reserve(items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const Item& item = items_[i];
    if (item.group >= num_groups_) {
      throw Error(ErrorCode::kInvalidRanking,
                  "item '" + item.id + "' has group " +
                      std::to_string(item.group) + " but only " +
                      std::to_string(num_groups_) + " groups are declared");
    }
    if (std::isnan(item.score)) {
      throw Error(ErrorCode::kInvalidRanking,
                  "item '" + item.id + "' has a NaN score");
    }
    if (!seen.insert(item.id).second) {
      throw Error(ErrorCode::kInvalidRanking,
                  "duplicate item id '" + item.id + "'");
    }
    if (i > 0 && items_[i - 1].score < item.score) {
      throw Error(ErrorCode::kInvalidRanking,
                  "scores increase between true ranks " + std::to_string(i) +
                      " and " + std::to_string(i + 1));
    }
  }
}

TrueRanking TrueRanking::FromUnsorted(std::vector<Item> items,
                                      std::size_t num_groups) {
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.score > b.score; });
  return TrueRanking(std::move(items), num_groups);
}

std::vector<std::int64_t> TrueRanking::GroupSizes() const {
  std::vector<std::int64_t> sizes(num_groups_, 0);
  for (const Item& item : items_) ++sizes[item.group];
  return sizes;
}

std::string_view SpecViolationName(SpecViolationKind kind) {
  switch (kind) {
    case SpecViolationKind::kTooFewGroups:
      return "TooFewGroups";
    case SpecViolationKind::kGroupCountMismatch:
      return "GroupCountMismatch";
    case SpecViolationKind::kProportionOutOfRange:
      return "ProportionOutOfRange";
    case SpecViolationKind::kNonPositiveWindow:
      return "NonPositiveWindow";
    case SpecViolationKind::kNonPositiveEpsilon:
      return "NonPositiveEpsilon";
    case SpecViolationKind::kBetaExceedsAlpha:
      return "BetaExceedsAlpha";
    case SpecViolationKind::kDegenerateBounds:
      return "DegenerateBounds";
    case SpecViolationKind::kSumAlphaNotAboveOne:
      return "SumAlphaNotAboveOne";
    case SpecViolationKind::kSumBetaNotBelowOne:
      return "SumBetaNotBelowOne";
    case SpecViolationKind::kNonIntegralBlockThreshold:
      return "NonIntegralBlockThreshold";
    case SpecViolationKind::kNonPositiveBlockBeta:
      return "NonPositiveBlockBeta";
    case SpecViolationKind::kEmptyGroup:
      return "EmptyGroup";
  }
  return "Unknown";
}

bool ValidationResult::Has(SpecViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const SpecViolation& v) { return v.kind == kind; });
}

std::string ValidationResult::Summary() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) out << "; ";
    out << SpecViolationName(violations[i].kind) << " ("
        << violations[i].message << ")";
  }
  return out.str();
}

ValidationResult ValidateSpec(const FairnessSpec& spec,
                              std::span<const std::int64_t> group_sizes) {
  ValidationResult result;
  auto fail = [&result](SpecViolationKind kind, std::string message) {
    result.violations.push_back({kind, std::move(message)});
  };

  const std::size_t groups = spec.alphas.size();
  if (spec.betas.size() != groups || group_sizes.size() != groups) {
    fail(SpecViolationKind::kGroupCountMismatch,
         std::to_string(groups) + " alphas, " +
             std::to_string(spec.betas.size()) + " betas, " +
             std::to_string(group_sizes.size()) + " group sizes");
    return result;
  }
  if (groups < 2) {
    fail(SpecViolationKind::kTooFewGroups,
         "at least two groups are required, got " + std::to_string(groups));
    return result;
  }
  if (spec.k < 1) {
    fail(SpecViolationKind::kNonPositiveWindow,
         "k must be positive, got " + std::to_string(spec.k));
  }
  if (spec.mode == FairnessMode::kConsecutiveWindows && spec.epsilon &&
      *spec.epsilon <= 0) {
    fail(SpecViolationKind::kNonPositiveEpsilon,
         "epsilon must be positive, got " + ToString(*spec.epsilon));
  }

  const bool blocks = spec.mode == FairnessMode::kBlocks;
  Rational sum_alpha = 0;
  Rational sum_beta = 0;
  for (std::size_t l = 0; l < groups; ++l) {
    const Rational& a = spec.alphas[l];
    const Rational& b = spec.betas[l];
    const std::string g = "group " + std::to_string(l + 1);
    sum_alpha += a;
    sum_beta += b;
    if (a <= 0 || a > 1) {
      fail(SpecViolationKind::kProportionOutOfRange,
           g + ": alpha " + ToString(a) + " not in (0, 1]");
    }
    if (b < 0 || b > 1) {
      fail(SpecViolationKind::kProportionOutOfRange,
           g + ": beta " + ToString(b) + " not in [0, 1]");
    }
    if (b > a) {
      fail(SpecViolationKind::kBetaExceedsAlpha,
           g + ": beta " + ToString(b) + " > alpha " + ToString(a));
    } else if (!blocks && b == a) {
      fail(SpecViolationKind::kDegenerateBounds,
           g + ": alpha == beta == " + ToString(a) +
               " leaves no slack for the window guarantee");
    }
    if (blocks && spec.k >= 1) {
      const Rational ak = a * spec.k;
      const Rational bk = b * spec.k;
      if (!IsIntegral(ak)) {
        fail(SpecViolationKind::kNonIntegralBlockThreshold,
             g + ": alpha*k = " + ToString(ak) + " is not an integer");
      }
      if (!IsIntegral(bk)) {
        fail(SpecViolationKind::kNonIntegralBlockThreshold,
             g + ": beta*k = " + ToString(bk) + " is not an integer");
      }
      if (b <= 0) {
        fail(SpecViolationKind::kNonPositiveBlockBeta,
             g + ": block mode needs beta > 0");
      }
    }
    if (group_sizes[l] <= 0) {
      fail(SpecViolationKind::kEmptyGroup, g + " has no items");
    }
  }
  if (blocks ? sum_alpha < 1 : sum_alpha <= 1) {
    fail(SpecViolationKind::kSumAlphaNotAboveOne,
         "sum of alphas is " + ToString(sum_alpha) +
             (blocks ? ", must be at least 1" : ", must exceed 1"));
  }
  if (sum_beta >= 1) {
    fail(SpecViolationKind::kSumBetaNotBelowOne,
         "sum of betas is " + ToString(sum_beta) + ", must be below 1");
  }
  result.n = *std::min_element(group_sizes.begin(), group_sizes.end());
  return result;
}

std::int64_t ValidateSpecOrThrow(const FairnessSpec& spec,
                                 std::span<const std::int64_t> group_sizes) {
  ValidationResult result = ValidateSpec(spec, group_sizes);
  if (!result.ok()) throw Error(ErrorCode::kInvalidSpec, result.Summary());
  return result.n;
}

std::size_t SlotRanking::OccupiedCount() const {
  return static_cast<std::size_t>(
      std::count_if(slots_.begin(), slots_.end(),
                    [](std::size_t s) { return s != kEmpty; }));
}

void CheckIsPermutation(std::span<const Item> ranking,
                        const TrueRanking& truth) {
  if (ranking.size() != truth.size()) {
    throw Error(ErrorCode::kInvalidRanking,
                "ranking has " + std::to_string(ranking.size()) +
                    " items, true ranking has " + std::to_string(truth.size()));
  }
  std::unordered_map<std::string_view, int> counts;
  counts.reserve(truth.size());
  for (const Item& item : truth.items()) ++counts[item.id];
  for (const Item& item : ranking) {
    auto it = counts.find(item.id);
    if (it == counts.end() || --it->second < 0) {
      throw Error(ErrorCode::kInvalidRanking,
                  "item '" + item.id + "' is unknown or repeated");
    }
  }
}

}  // namespace fairrank
