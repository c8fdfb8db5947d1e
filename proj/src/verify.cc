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

#include "fairrank/verify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "fairrank/error.h"

namespace fairrank {

std::string AuditReport::Summary(std::size_t max_lines) const {
  std::ostringstream out;
  if (passed()) {
    out << "passed (" << windows_checked << " windows checked)";
    return out.str();
  }
  out << violations.size() << " violation(s) in " << windows_checked
      << " windows";
  for (std::size_t i = 0; i < violations.size() && i < max_lines; ++i) {
    const FairnessViolation& v = violations[i];
    out << "\n  ranks " << v.first_rank << "-" << v.last_rank << ", group "
        << v.group + 1 << ": " << v.observed
        << (v.kind == FairnessViolation::Kind::kAboveUpper ? " > " : " < ")
        << ToString(v.required);
  }
  if (violations.size() > max_lines) {
    out << "\n  ... " << violations.size() - max_lines << " more";
  }
  return out.str();
}

namespace {

void CheckWindow(const std::vector<std::int64_t>& counts,
                 const std::vector<Rational>& upper,
                 const std::vector<Rational>& lower, std::int64_t first,
                 std::int64_t last, AuditReport& report) {
  ++report.windows_checked;
  for (GroupId g = 0; g < counts.size(); ++g) {
    if (upper[g] < counts[g]) {
      report.violations.push_back({FairnessViolation::Kind::kAboveUpper, first,
                                   last, g, counts[g], upper[g]});
    }
    if (lower[g] > counts[g]) {
      report.violations.push_back({FairnessViolation::Kind::kBelowLower, first,
                                   last, g, counts[g], lower[g]});
    }
  }
}

void CheckGroups(std::span<const Item> ranking, const FairnessSpec& spec) {
  if (spec.betas.size() != spec.num_groups()) {
    throw Error(ErrorCode::kInvalidSpec, "alpha/beta length mismatch");
  }
  if (spec.k < 1) throw Error(ErrorCode::kInvalidSpec, "k must be positive");
  for (const Item& item : ranking) {
    if (item.group >= spec.num_groups()) {
      throw Error(ErrorCode::kInvalidRanking,
                  "item '" + item.id + "' has a group outside the spec");
    }
  }
}

}  // namespace

AuditReport AuditConsecutive(std::span<const Item> ranking,
                             const FairnessSpec& spec, std::int64_t prefix_len,
                             const Rational& epsilon) {
  CheckGroups(ranking, spec);
  if (prefix_len < 0 || std::cmp_greater(prefix_len, ranking.size())) {
    throw Error(ErrorCode::kWindowOutOfRange,
                "prefix " + std::to_string(prefix_len) + " on a ranking of " +
                    std::to_string(ranking.size()));
  }
  const std::size_t groups = spec.num_groups();
  std::vector<Rational> upper(groups);
  std::vector<Rational> lower(groups);
  for (GroupId g = 0; g < groups; ++g) {
    upper[g] = spec.alphas[g] * (1 + epsilon) * spec.k;
    lower[g] = spec.betas[g] * (1 - epsilon) * spec.k;
  }
  AuditReport report;
  if (prefix_len < spec.k) return report;
  std::vector<std::int64_t> counts(groups, 0);
  for (std::int64_t r = 1; r <= spec.k; ++r) {
    ++counts[ranking[static_cast<std::size_t>(r - 1)].group];
  }
  for (std::int64_t first = 1;; ++first) {
    const std::int64_t last = first + spec.k - 1;
    CheckWindow(counts, upper, lower, first, last, report);
    if (last == prefix_len) break;
    --counts[ranking[static_cast<std::size_t>(first - 1)].group];
    ++counts[ranking[static_cast<std::size_t>(last)].group];
  }
  return report;
}

AuditReport AuditBlocks(std::span<const Item> ranking, const FairnessSpec& spec,
                        std::int64_t num_blocks) {
  CheckGroups(ranking, spec);
  if (num_blocks < 0 ||
      std::cmp_greater(num_blocks * spec.k, ranking.size())) {
    throw Error(ErrorCode::kWindowOutOfRange,
                std::to_string(num_blocks) + " blocks of " +
                    std::to_string(spec.k) + " on a ranking of " +
                    std::to_string(ranking.size()));
  }
  const std::size_t groups = spec.num_groups();
  std::vector<Rational> upper(groups);
  std::vector<Rational> lower(groups);
  for (GroupId g = 0; g < groups; ++g) {
    upper[g] = spec.alphas[g] * spec.k;
    lower[g] = spec.betas[g] * spec.k;
  }
  AuditReport report;
  for (std::int64_t i = 0; i < num_blocks; ++i) {
    std::vector<std::int64_t> counts(groups, 0);
    for (std::int64_t r = i * spec.k; r < (i + 1) * spec.k; ++r) {
      ++counts[ranking[static_cast<std::size_t>(r)].group];
    }
    CheckWindow(counts, upper, lower, i * spec.k + 1, (i + 1) * spec.k, report);
  }
  return report;
}

GuaranteeRegimes ClassifySpec(const FairnessSpec& spec) {
  GuaranteeRegimes regimes;
  if (spec.num_groups() == 0 || spec.betas.size() != spec.num_groups()) {
    return regimes;
  }
  bool ordered = true;
  bool beta_positive = true;
  bool integral = spec.k >= 1;
  Rational sum_alpha = 0;
  Rational sum_beta = 0;
  for (std::size_t l = 0; l < spec.num_groups(); ++l) {
    const Rational& a = spec.alphas[l];
    const Rational& b = spec.betas[l];
    ordered = ordered && b >= 0 && b <= a && a <= 1 && a > 0;
    beta_positive = beta_positive && b > 0;
    integral = integral && IsIntegral(a * spec.k) && IsIntegral(b * spec.k);
    sum_alpha += a;
    sum_beta += b;
  }
  regimes.lower_bound = ordered && beta_positive && sum_alpha >= 1 &&
                        sum_beta <= 1 && spec.k >= 1;
  regimes.window_guarantee =
      ordered && sum_alpha > 1 && sum_beta < 1 && spec.k >= 1;
  regimes.block_guarantee =
      regimes.window_guarantee && beta_positive && integral;
  return regimes;
}

namespace {

void CheckLowerBoundPreconditions(const FairnessSpec& spec) {
  if (spec.num_groups() == 0 || spec.betas.size() != spec.num_groups()) {
    throw Error(ErrorCode::kInvalidSpec, "alpha/beta length mismatch");
  }
  Rational sum_alpha = 0;
  Rational sum_beta = 0;
  for (std::size_t l = 0; l < spec.num_groups(); ++l) {
    const Rational& a = spec.alphas[l];
    const Rational& b = spec.betas[l];
    if (!(a > 0 && a <= 1 && b >= 0 && b <= a)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "group " + std::to_string(l + 1) +
                      " needs 0 <= beta <= alpha <= 1 and alpha > 0");
    }
    sum_alpha += a;
    sum_beta += b;
  }
  if (sum_alpha < 1) {
    throw Error(ErrorCode::kInvalidSpec,
                "sum of alphas " + ToString(sum_alpha) + " is below 1");
  }
  if (sum_beta > 1) {
    throw Error(ErrorCode::kInvalidSpec,
                "sum of betas " + ToString(sum_beta) + " exceeds 1");
  }
}

// min{alpha_l, 1 - sum_{j != l} beta_j}
Rational GroupCapacity(const FairnessSpec& spec, GroupId l) {
  const Rational sum_beta =
      std::accumulate(spec.betas.begin(), spec.betas.end(), Rational(0));
  return std::min(spec.alphas[l], 1 - (sum_beta - spec.betas[l]));
}

}  // namespace

AdversarialInstance MakeAdversarialInstance(const FairnessSpec& spec,
                                            std::int64_t n) {
  CheckLowerBoundPreconditions(spec);
  if (n < 1) throw Error(ErrorCode::kInvalidSpec, "n must be positive");
  const std::size_t groups = spec.num_groups();
  GroupId l_hat = 0;
  for (GroupId l = 1; l < groups; ++l) {
    if (GroupCapacity(spec, l) < GroupCapacity(spec, l_hat)) l_hat = l;
  }
  const auto total = static_cast<std::int64_t>(groups) * n;
  std::vector<Item> items;
  items.reserve(static_cast<std::size_t>(total));
  auto add = [&](GroupId g, std::int64_t i) {
    const auto score = static_cast<double>(total - static_cast<std::int64_t>(items.size()));
    items.push_back(MakeItem("g" + std::to_string(g + 1) + "_" +
                                 std::to_string(i + 1),
                             score, g));
  };
  for (std::int64_t i = 0; i < n; ++i) add(l_hat, i);
  for (std::int64_t i = 0; i < n; ++i) {
    for (GroupId g = 0; g < groups; ++g) {
      if (g != l_hat) add(g, i);
    }
  }
  return {TrueRanking(std::move(items), groups), l_hat, n};
}

Rational LowerBoundValue(const FairnessSpec& spec) {
  CheckLowerBoundPreconditions(spec);
  const Rational alpha_min =
      *std::min_element(spec.alphas.begin(), spec.alphas.end());
  const auto l_star = static_cast<GroupId>(
      std::min_element(spec.betas.begin(), spec.betas.end()) -
      spec.betas.begin());
  Rational others = 0;
  for (std::size_t l = 0; l < spec.num_groups(); ++l) {
    if (l != l_star) others += spec.betas[l];
  }
  const Rational denominator = std::min(alpha_min, 1 - others);
  if (denominator <= 0) {
    throw Error(ErrorCode::kInvalidSpec, "lower bound is unbounded");
  }
  return 1 / denominator;
}

namespace {

struct BlockBounds {
  std::vector<std::int64_t> lower;
  std::vector<std::int64_t> upper;
};

BlockBounds ExactBlockBounds(const FairnessSpec& spec) {
  BlockBounds bounds;
  for (std::size_t l = 0; l < spec.num_groups(); ++l) {
    bounds.lower.push_back(Ceil(spec.betas[l] * spec.k));
    bounds.upper.push_back(Floor(spec.alphas[l] * spec.k));
  }
  return bounds;
}

Rational MinUnderrankingByPermutation(const TrueRanking& truth,
                                      const FairnessSpec& spec,
                                      std::int64_t num_blocks) {
  const std::size_t n = truth.size();
  const std::size_t groups = spec.num_groups();
  const BlockBounds bounds = ExactBlockBounds(spec);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::optional<Rational> best;
  do {
    bool fair = true;
    for (std::int64_t i = 0; i < num_blocks && fair; ++i) {
      std::vector<std::int64_t> counts(groups, 0);
      for (std::int64_t r = i * spec.k; r < (i + 1) * spec.k; ++r) {
        ++counts[truth.items()[order[static_cast<std::size_t>(r)]].group];
      }
      for (std::size_t g = 0; g < groups && fair; ++g) {
        fair = counts[g] >= bounds.lower[g] && counts[g] <= bounds.upper[g];
      }
    }
    if (!fair) continue;
    Rational worst = 0;
    for (std::size_t pos = 0; pos < n; ++pos) {
      worst = std::max(worst, Rational(static_cast<std::int64_t>(pos + 1),
                                       static_cast<std::int64_t>(order[pos] + 1)));
    }
    if (!best || worst < *best) best = worst;
  } while (std::next_permutation(order.begin(), order.end()));
  if (!best) {
    throw Error(ErrorCode::kNoFeasibleRanking,
                "no ranking is fair in the top " + std::to_string(num_blocks) +
                    " blocks");
  }
  return *best;
}

class PatternSearch {
 public:
  static constexpr std::size_t kBitsPerCount = 6;
  static constexpr std::size_t kMaxGroups = 5;
  static constexpr std::size_t kMaxStates = 20'000'000;

  PatternSearch(const TrueRanking& truth, const FairnessSpec& spec,
                std::int64_t num_blocks)
      : k_(spec.k),
        fair_prefix_(num_blocks * spec.k),
        total_(static_cast<std::int64_t>(truth.size())),
        bounds_(ExactBlockBounds(spec)),
        members_(spec.num_groups()) {
    for (std::size_t i = 0; i < truth.size(); ++i) {
      members_[truth.items()[i].group].push_back(static_cast<std::int64_t>(i + 1));
    }
  }

  std::optional<Rational> Solve() {
    std::vector<std::int64_t> counts(members_.size(), 0);
    std::vector<std::int64_t> start(members_.size(), 0);
    return Visit(counts, start, 0);
  }

 private:
  std::uint64_t Key(const std::vector<std::int64_t>& counts,
                    const std::vector<std::int64_t>& start) const {
    std::uint64_t key = 0;
    for (std::size_t g = 0; g < counts.size(); ++g) {
      key = (key << kBitsPerCount) | static_cast<std::uint64_t>(counts[g]);
      key = (key << kBitsPerCount) | static_cast<std::uint64_t>(start[g]);
    }
    return key;
  }

  // Min over completions of the worst rank ratio among items still to place.
  std::optional<Rational> Visit(std::vector<std::int64_t>& counts,
                                std::vector<std::int64_t>& start,
                                std::int64_t placed) {
    if (placed == total_) return Rational(0);
    const std::uint64_t key = Key(counts, start);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const std::int64_t position = placed + 1;
    const bool constrained = position <= fair_prefix_;
    const bool closes_block = constrained && position % k_ == 0;
    std::optional<Rational> best;
    for (std::size_t g = 0; g < members_.size(); ++g) {
      if (std::cmp_equal(counts[g], members_[g].size())) continue;
      ++counts[g];
      bool ok = true;
      if (constrained) {
        ok = counts[g] - start[g] <= bounds_.upper[g];
        if (ok && closes_block) {
          for (std::size_t h = 0; h < members_.size() && ok; ++h) {
            const std::int64_t in_block = counts[h] - start[h];
            ok = in_block >= bounds_.lower[h] && in_block <= bounds_.upper[h];
          }
        }
      }
      if (ok) {
        const Rational ratio(position, members_[g][counts[g] - 1]);
        if (!best || ratio < *best) {
          std::vector<std::int64_t> saved = start;
          if (closes_block) {
            start = counts;
          } else if (!constrained) {
            std::fill(start.begin(), start.end(), 0);
          }
          std::optional<Rational> rest = Visit(counts, start, placed + 1);
          start = std::move(saved);
          if (rest) {
            const Rational worst = std::max(ratio, *rest);
            if (!best || worst < *best) best = worst;
          }
        }
      }
      --counts[g];
    }
    if (memo_.size() >= kMaxStates) {
      throw Error(ErrorCode::kInstanceTooLarge,
                  "pattern search exceeded " + std::to_string(kMaxStates) +
                      " states");
    }
    memo_.emplace(key, best);
    return best;
  }

  std::int64_t k_;
  std::int64_t fair_prefix_;
  std::int64_t total_;
  BlockBounds bounds_;
  std::vector<std::vector<std::int64_t>> members_;
  std::unordered_map<std::uint64_t, std::optional<Rational>> memo_;
};

}  // namespace

Rational BruteForceMinUnderranking(const TrueRanking& truth,
                                   const FairnessSpec& spec,
                                   std::int64_t num_blocks,
                                   EnumerationMethod method) {
  if (spec.num_groups() != truth.num_groups() ||
      spec.betas.size() != spec.num_groups() || spec.k < 1) {
    throw Error(ErrorCode::kInvalidSpec, "spec does not match the ranking");
  }
  if (num_blocks < 0 || std::cmp_greater(num_blocks * spec.k, truth.size())) {
    throw Error(ErrorCode::kWindowOutOfRange,
                std::to_string(num_blocks) + " blocks of " +
                    std::to_string(spec.k) + " exceed " +
                    std::to_string(truth.size()) + " items");
  }
  if (method == EnumerationMethod::kAuto) {
    method = truth.size() <= 8 ? EnumerationMethod::kPermutations
                               : EnumerationMethod::kGroupPatterns;
  }
  if (method == EnumerationMethod::kPermutations) {
    if (truth.size() > 10) {
      throw Error(ErrorCode::kInstanceTooLarge,
                  "permutation enumeration needs N <= 10, got " +
                      std::to_string(truth.size()));
    }
    return MinUnderrankingByPermutation(truth, spec, num_blocks);
  }
  constexpr std::size_t kMaxCount = (1u << PatternSearch::kBitsPerCount) - 1;
  if (truth.num_groups() > PatternSearch::kMaxGroups) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "pattern enumeration supports at most 5 groups");
  }
  for (std::int64_t size : truth.GroupSizes()) {
    if (std::cmp_greater(size, kMaxCount)) {
      throw Error(ErrorCode::kInstanceTooLarge,
                  "pattern enumeration supports groups of at most 63 items");
    }
  }
  std::optional<Rational> best = PatternSearch(truth, spec, num_blocks).Solve();
  if (!best) {
    throw Error(ErrorCode::kNoFeasibleRanking,
                "no ranking is fair in the top " + std::to_string(num_blocks) +
                    " blocks");
  }
  return *best;
}

double BruteForceMaxUtility(const TrueRanking& truth,
                            const PrefixConstraints& constraints) {
  constraints.Validate();
  const std::size_t n = truth.size();
  const std::int64_t k = constraints.k;
  if (n > 8 || k > 8) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "exhaustive utility search needs N <= 8 and k <= 8");
  }
  if (constraints.num_groups() != truth.num_groups()) {
    throw Error(ErrorCode::kInvalidSpec, "group count mismatch");
  }
  if (std::cmp_greater(k, n)) {
    throw Error(ErrorCode::kInfeasible, "k exceeds the number of items");
  }
  const std::size_t groups = truth.num_groups();
  std::vector<bool> used(n, false);
  std::vector<std::int64_t> counts(groups, 0);
  std::optional<double> best;
  std::function<void(std::int64_t, double)> extend = [&](std::int64_t depth,
                                                         double utility) {
    if (depth == k) {
      if (!best || utility > *best) best = utility;
      return;
    }
    const std::int64_t prefix = depth + 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const GroupId g = truth.items()[i].group;
      ++counts[g];
      bool ok = true;
      for (std::size_t h = 0; h < groups && ok; ++h) {
        ok = counts[h] >= constraints.lower[h][prefix - 1] &&
             counts[h] <= constraints.upper[h][prefix - 1];
      }
      if (ok) {
        used[i] = true;
        extend(prefix, utility + truth.items()[i].score /
                                     std::log2(static_cast<double>(prefix) + 1.0));
        used[i] = false;
      }
      --counts[g];
    }
  };
  extend(0, 0.0);
  if (!best) {
    throw Error(ErrorCode::kInfeasible,
                "no ordering satisfies every prefix bound");
  }
  return *best;
}

}  // namespace fairrank
