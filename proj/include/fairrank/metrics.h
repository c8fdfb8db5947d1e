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

#ifndef FAIRRANK_METRICS_H_
#define FAIRRANK_METRICS_H_

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "fairrank/model.h"
#include "fairrank/rational.h"

namespace fairrank {

// Ranks first..last, 1-based and inclusive.
struct RankInterval {
  std::int64_t first = 1;
  std::int64_t last = 1;

  std::int64_t length() const { return last - first + 1; }
  auto operator<=>(const RankInterval&) const = default;
};

// Share of `window` held by `group`. Throws Error(kWindowOutOfRange).
Rational Representation(std::span<const Item> ranking, GroupId group,
                        RankInterval window);

// max over true ranks j <= k_prime of (rank of that item in `fair`) / j. The
// whole of `fair` is searched. Throws Error(kItemMissing).
Rational UnderrankingAt(std::span<const Item> fair, const TrueRanking& truth,
                        std::int64_t k_prime);

// Underranking over the full true ranking.
Rational ObservedUnderranking(std::span<const Item> fair,
                              const TrueRanking& truth);

// sum_{i<=k'} 2^{y'_i}/log2(i+1) over the same sum for the true ranking, with
// y the items' relevance.
double NdcgAt(std::span<const Item> fair, const TrueRanking& truth,
              std::int64_t k_prime);

// |true top-K intersected with fair top-K|.
std::int64_t PrecisionAt(std::span<const Item> fair, const TrueRanking& truth,
                         std::int64_t top_k);

struct MetricsReport {
  std::map<std::pair<GroupId, RankInterval>, Rational> representation;
  std::map<std::int64_t, Rational> underranking;
  std::map<std::int64_t, double> ndcg;
  std::map<std::int64_t, std::int64_t> precision;
};

// Representation for every group in every window; the other metrics at each
// evaluation point.
MetricsReport Evaluate(std::span<const Item> fair, const TrueRanking& truth,
                       std::span<const RankInterval> windows,
                       std::span<const std::int64_t> eval_points);

}  // namespace fairrank

#endif  // FAIRRANK_METRICS_H_
