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

#include "fairrank/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "fairrank/error.h"

namespace fairrank {

namespace {

void CheckPrefix(std::int64_t k_prime, std::size_t available,
                 std::string_view what) {
  if (k_prime < 0 || std::cmp_greater(k_prime, available)) {
    throw Error(ErrorCode::kWindowOutOfRange,
                std::string(what) + " " + std::to_string(k_prime) +
                    " exceeds ranking length " + std::to_string(available));
  }
}

}  // namespace

Rational Representation(std::span<const Item> ranking, GroupId group,
                        RankInterval window) {
  if (window.first < 1 || window.last < window.first ||
      std::cmp_greater(window.last, ranking.size())) {
    throw Error(ErrorCode::kWindowOutOfRange,
                "window [" + std::to_string(window.first) + ", " +
                    std::to_string(window.last) + "] on a ranking of " +
                    std::to_string(ranking.size()));
  }
  std::int64_t hits = 0;
  for (std::int64_t r = window.first; r <= window.last; ++r) {
    if (ranking[static_cast<std::size_t>(r - 1)].group == group) ++hits;
  }
  return Rational(hits, window.length());
}

Rational UnderrankingAt(std::span<const Item> fair, const TrueRanking& truth,
                        std::int64_t k_prime) {
  CheckPrefix(k_prime, truth.size(), "k'");
  std::unordered_map<std::string_view, std::int64_t> position;
  position.reserve(fair.size());
  for (std::size_t i = 0; i < fair.size(); ++i) {
    position.emplace(fair[i].id, static_cast<std::int64_t>(i + 1));
  }
  Rational worst = 0;
  for (std::int64_t j = 1; j <= k_prime; ++j) {
    const Item& item = truth.AtRank(static_cast<std::size_t>(j));
    auto it = position.find(item.id);
    if (it == position.end()) {
      throw Error(ErrorCode::kItemMissing,
                  "true rank " + std::to_string(j) + " item '" + item.id +
                      "' is not in the ranking");
    }
    worst = std::max(worst, Rational(it->second, j));
  }
  return worst;
}

Rational ObservedUnderranking(std::span<const Item> fair,
                              const TrueRanking& truth) {
  return UnderrankingAt(fair, truth, static_cast<std::int64_t>(truth.size()));
}

double NdcgAt(std::span<const Item> fair, const TrueRanking& truth,
              std::int64_t k_prime) {
  CheckPrefix(k_prime, std::min(fair.size(), truth.size()), "k'");
  double gained = 0.0;
  double ideal = 0.0;
  for (std::int64_t i = 1; i <= k_prime; ++i) {
    const double discount = std::log2(static_cast<double>(i) + 1.0);
    gained += std::exp2(fair[static_cast<std::size_t>(i - 1)].relevance) / discount;
    ideal += std::exp2(truth.AtRank(static_cast<std::size_t>(i)).relevance) / discount;
  }
  return ideal == 0.0 ? 1.0 : gained / ideal;
}

std::int64_t PrecisionAt(std::span<const Item> fair, const TrueRanking& truth,
                         std::int64_t top_k) {
  CheckPrefix(top_k, std::min(fair.size(), truth.size()), "K");
  std::unordered_set<std::string_view> head;
  head.reserve(static_cast<std::size_t>(top_k));
  for (std::int64_t j = 1; j <= top_k; ++j) {
    head.insert(truth.AtRank(static_cast<std::size_t>(j)).id);
  }
  std::int64_t kept = 0;
  for (std::int64_t i = 0; i < top_k; ++i) {
    if (head.contains(fair[static_cast<std::size_t>(i)].id)) ++kept;
  }
  return kept;
}

MetricsReport Evaluate(std::span<const Item> fair, const TrueRanking& truth,
                       std::span<const RankInterval> windows,
                       std::span<const std::int64_t> eval_points) {
  MetricsReport report;
  for (const RankInterval& window : windows) {
    for (GroupId g = 0; g < truth.num_groups(); ++g) {
      report.representation[{g, window}] = Representation(fair, g, window);
    }
  }
  for (std::int64_t k_prime : eval_points) {
    report.underranking[k_prime] = UnderrankingAt(fair, truth, k_prime);
    report.ndcg[k_prime] = NdcgAt(fair, truth, k_prime);
    report.precision[k_prime] = PrecisionAt(fair, truth, k_prime);
  }
  return report;
}

}  // namespace fairrank
