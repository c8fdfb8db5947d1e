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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "fairrank/error.h"

namespace fairrank {

PrefixConstraints PrefixConstraints::Unconstrained(std::size_t num_groups,
                                                   std::int64_t k) {
  PrefixConstraints c;
  c.k = k;
  c.lower.assign(num_groups, std::vector<std::int64_t>(k, 0));
  c.upper.assign(num_groups, std::vector<std::int64_t>(k, 0));
  for (auto& row : c.upper) {
    for (std::int64_t p = 1; p <= k; ++p) row[p - 1] = p;
  }
  return c;
}

void PrefixConstraints::Validate() const {
  if (k < 0) throw Error(ErrorCode::kInvalidSpec, "negative horizon k");
  if (lower.size() != upper.size()) {
    throw Error(ErrorCode::kInvalidSpec, "lower/upper group count mismatch");
  }
  for (std::size_t g = 0; g < lower.size(); ++g) {
    if (std::cmp_not_equal(lower[g].size(), k) ||
        std::cmp_not_equal(upper[g].size(), k)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "group " + std::to_string(g + 1) + " bounds are not length k");
    }
    for (std::int64_t p = 1; p <= k; ++p) {
      const std::int64_t lo = lower[g][p - 1];
      const std::int64_t hi = upper[g][p - 1];
      if (lo < 0 || lo > hi || hi > p) {
        throw Error(ErrorCode::kInvalidSpec,
                    "group " + std::to_string(g + 1) + ", prefix " +
                        std::to_string(p) + ": need 0 <= L <= U <= p, got L=" +
                        std::to_string(lo) + " U=" + std::to_string(hi));
      }
      if (p > 1 && (lo < lower[g][p - 2] || hi < upper[g][p - 2])) {
        throw Error(ErrorCode::kInvalidSpec,
                    "group " + std::to_string(g + 1) +
                        " bounds decrease at prefix " + std::to_string(p));
      }
    }
  }
}

double PositionDiscount(std::int64_t rank) {
  return 1.0 / std::log2(static_cast<double>(rank) + 1.0);
}

double DiscountedUtility(std::span<const Item> ranking) {
  double total = 0.0;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    total += ranking[i].score * PositionDiscount(static_cast<std::int64_t>(i + 1));
  }
  return total;
}

DpResult CelisDp(const TrueRanking& truth,
                 const PrefixConstraints& constraints) {
  constraints.Validate();
  const std::size_t groups = truth.num_groups();
  const std::int64_t k = constraints.k;
  if (constraints.num_groups() != groups) {
    throw Error(ErrorCode::kInvalidSpec,
                "constraints cover " + std::to_string(constraints.num_groups()) +
                    " groups, ranking has " + std::to_string(groups));
  }
  if (groups > 4 || (groups == 4 && k > 50)) {
    throw Error(ErrorCode::kStateSpaceTooLarge,
                std::to_string(groups) + " groups with k=" + std::to_string(k));
  }
  if (std::cmp_greater(k, truth.size())) {
    throw Error(ErrorCode::kInfeasible,
                "k=" + std::to_string(k) + " exceeds the " +
                    std::to_string(truth.size()) + " available items");
  }

  std::vector<std::vector<std::size_t>> members(groups);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    members[truth.items()[i].group].push_back(i);
  }
  std::vector<std::int64_t> caps(groups);
  std::vector<std::size_t> stride(groups);
  std::size_t total = 1;
  constexpr std::size_t kMaxStates = 50'000'000;
  for (std::size_t g = 0; g < groups; ++g) {
    caps[g] = std::min<std::int64_t>(static_cast<std::int64_t>(members[g].size()), k);
    stride[g] = total;
    total *= static_cast<std::size_t>(caps[g] + 1);
    if (total > kMaxStates) {
      throw Error(ErrorCode::kStateSpaceTooLarge,
                  "more than " + std::to_string(kMaxStates) + " count vectors");
    }
  }

  constexpr double kUnreached = -std::numeric_limits<double>::infinity();
  std::vector<double> value(total, kUnreached);
  // Among equal utilities (tied scores sum bitwise identically along a path),
  // prefer the ordering closest to the true one.
  std::vector<double> tiebreak(total, kUnreached);
  std::vector<std::int8_t> choice(total, -1);
  value[0] = 0.0;
  tiebreak[0] = 0.0;
  auto better = [&](double v, double t, std::size_t than) {
    return v > value[than] || (v == value[than] && t > tiebreak[than]);
  };

  // Appending an item moves to a larger state index, so index order is a
  // topological order of the transition graph.
  std::vector<std::int64_t> counts(groups, 0);
  std::int64_t placed = 0;
  auto advance = [&] {
    for (std::size_t g = 0; g < groups; ++g) {
      if (counts[g] < caps[g]) {
        ++counts[g];
        ++placed;
        return;
      }
      placed -= counts[g];
      counts[g] = 0;
    }
  };
  for (std::size_t idx = 0; idx < total; ++idx, advance()) {
    if (value[idx] == kUnreached || placed >= k) continue;
    const std::int64_t prefix = placed + 1;
    const double discount = PositionDiscount(prefix);
    for (std::size_t g = 0; g < groups; ++g) {
      if (counts[g] >= caps[g]) continue;
      bool ok = true;
      for (std::size_t h = 0; h < groups && ok; ++h) {
        const std::int64_t c = counts[h] + (h == g ? 1 : 0);
        ok = c >= constraints.lower[h][prefix - 1] &&
             c <= constraints.upper[h][prefix - 1];
      }
      if (!ok) continue;
      const std::size_t item = members[g][counts[g]];
      const double next = value[idx] + truth.items()[item].score * discount;
      const double next_tie =
          tiebreak[idx] - static_cast<double>(item) * discount;
      const std::size_t target = idx + stride[g];
      if (better(next, next_tie, target)) {
        value[target] = next;
        tiebreak[target] = next_tie;
        choice[target] = static_cast<std::int8_t>(g);
      }
    }
  }

  std::size_t best = total;
  std::fill(counts.begin(), counts.end(), 0);
  placed = 0;
  for (std::size_t idx = 0; idx < total; ++idx, advance()) {
    if (placed != k || value[idx] == kUnreached) continue;
    if (best == total || better(value[idx], tiebreak[idx], best)) best = idx;
  }
  if (best == total) {
    throw Error(ErrorCode::kInfeasible,
                "no top-" + std::to_string(k) +
                    " ranking satisfies every prefix bound");
  }

  for (std::size_t g = 0, rest = best; g < groups; ++g) {
    counts[g] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(caps[g] + 1));
    rest /= static_cast<std::size_t>(caps[g] + 1);
  }
  DpResult result;
  result.utility = value[best];
  result.ranking.items.resize(static_cast<std::size_t>(k));
  for (std::size_t idx = best, pos = static_cast<std::size_t>(k); pos > 0; --pos) {
    const auto g = static_cast<std::size_t>(choice[idx]);
    --counts[g];
    result.ranking.items[pos - 1] =
        truth.items()[members[g][static_cast<std::size_t>(counts[g])]];
    idx -= stride[g];
  }
  return result;
}

PrefixConstraints PrefixConstraintsFromDelta(const Rational& p_star,
                                             const Rational& delta,
                                             std::int64_t k,
                                             BoundDirection direction,
                                             std::size_t num_groups,
                                             GroupId protected_group) {
  const Rational p = p_star + delta;
  if (p < 0 || p > 1) {
    throw Error(ErrorCode::kOutOfRangeProportion,
                "p* + delta = " + ToString(p) + " is outside [0, 1]");
  }
  if (protected_group >= num_groups) {
    throw Error(ErrorCode::kInvalidSpec, "protected group out of range");
  }
  PrefixConstraints c = PrefixConstraints::Unconstrained(num_groups, k);
  for (std::int64_t prefix = 1; prefix <= k; ++prefix) {
    if (direction == BoundDirection::kLowerBound) {
      c.lower[protected_group][prefix - 1] = Ceil(p * prefix);
    } else {
      c.upper[protected_group][prefix - 1] = Floor(p * prefix);
    }
  }
  return c;
}

namespace {

// Smallest m with P[Bin(trials, p) <= m] >= significance.
std::int64_t BinomialQuantile(std::int64_t trials, double p,
                              double significance) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(static_cast<double>(trials) + 1.0);
  double cdf = 0.0;
  for (std::int64_t m = 0; m <= trials; ++m) {
    const double x = static_cast<double>(m);
    cdf += std::exp(log_n_fact - std::lgamma(x + 1.0) -
                    std::lgamma(static_cast<double>(trials - m) + 1.0) +
                    x * log_p + static_cast<double>(trials - m) * log_q);
    if (cdf >= significance) return m;
  }
  return trials;
}

}  // namespace

std::vector<std::int64_t> FairStarMinimums(const Rational& p, std::int64_t k,
                                           const FairStarRule& rule) {
  if (p < 0 || p > 1) {
    throw Error(ErrorCode::kOutOfRangeProportion,
                "p = " + ToString(p) + " is outside [0, 1]");
  }
  std::vector<std::int64_t> minimums;
  minimums.reserve(static_cast<std::size_t>(std::max<std::int64_t>(k, 0)));
  for (std::int64_t r = 1; r <= k; ++r) {
    if (rule.kind == FairStarRule::Kind::kFloor) {
      minimums.push_back(Floor(p * r));
    } else {
      minimums.push_back(BinomialQuantile(r, ToDouble(p), rule.significance));
    }
  }
  return minimums;
}

FairRanking FairStar(const TrueRanking& truth, GroupId protected_group,
                     const Rational& p, std::int64_t k,
                     const FairStarRule& rule) {
  if (truth.num_groups() != 2 || protected_group > 1) {
    throw Error(ErrorCode::kInvalidSpec,
                "FA*IR needs exactly one protected and one other group");
  }
  if (std::cmp_greater(k, truth.size())) {
    throw Error(ErrorCode::kInfeasible,
                "k=" + std::to_string(k) + " exceeds the " +
                    std::to_string(truth.size()) + " available items");
  }
  const std::vector<std::int64_t> minimums = FairStarMinimums(p, k, rule);
  std::vector<std::size_t> queue[2];
  for (std::size_t i = 0; i < truth.size(); ++i) {
    queue[truth.items()[i].group == protected_group ? 0 : 1].push_back(i);
  }
  std::size_t head[2] = {0, 0};
  std::int64_t protected_count = 0;
  FairRanking out;
  out.items.reserve(static_cast<std::size_t>(k));
  for (std::int64_t r = 1; r <= k; ++r) {
    int from;
    if (protected_count < minimums[r - 1]) {
      if (head[0] == queue[0].size()) {
        throw Error(ErrorCode::kInsufficientProtectedItems,
                    "rank " + std::to_string(r) + " needs " +
                        std::to_string(minimums[r - 1]) +
                        " protected items, only " +
                        std::to_string(protected_count) + " exist");
      }
      from = 0;
    } else if (head[0] == queue[0].size()) {
      from = 1;
    } else if (head[1] == queue[1].size()) {
      from = 0;
    } else {
      from = queue[0][head[0]] < queue[1][head[1]] ? 0 : 1;
    }
    out.items.push_back(truth.items()[queue[from][head[from]++]]);
    if (from == 0) ++protected_count;
  }
  return out;
}

}  // namespace fairrank
