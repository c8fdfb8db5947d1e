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

#include "fairrank/harness.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <unordered_set>
#include <utility>

#include "fairrank/alg.h"
#include "fairrank/error.h"
#include "json.hpp"

namespace fairrank {

std::string AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kAlg: return "alg";
    case Algorithm::kCelisDp: return "celis_dp";
    case Algorithm::kFairStar: return "fair";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "alg") return Algorithm::kAlg;
  if (name == "dp" || name == "celis" || name == "celis_dp") {
    return Algorithm::kCelisDp;
  }
  if (name == "fair" || name == "fastar" || name == "fa*ir") {
    return Algorithm::kFairStar;
  }
  throw Error(ErrorCode::kParseError,
              "unknown algorithm '" + std::string(name) +
                  "' (expected alg, dp or fair)");
}

std::string TemplateName(ConstraintTemplate t) {
  switch (t) {
    case ConstraintTemplate::kLowerBound: return "lower";
    case ConstraintTemplate::kUpperBound: return "upper";
    case ConstraintTemplate::kProportional: return "proportional";
  }
  return "unknown";
}

ConstraintTemplate ParseTemplate(std::string_view name) {
  if (name == "lower") return ConstraintTemplate::kLowerBound;
  if (name == "upper") return ConstraintTemplate::kUpperBound;
  if (name == "proportional") return ConstraintTemplate::kProportional;
  throw Error(ErrorCode::kParseError,
              "unknown template '" + std::string(name) +
                  "' (expected lower, upper or proportional)");
}

void ExperimentConfig::Validate(std::size_t num_groups) const {
  if (k < 1) throw Error(ErrorCode::kInvalidSpec, "k must be positive");
  if (algorithms.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "no algorithm selected");
  }
  if (protected_group >= num_groups) {
    throw Error(ErrorCode::kInvalidSpec,
                "protected group " + std::to_string(protected_group + 1) +
                    " but the dataset has " + std::to_string(num_groups));
  }
  if (epsilon <= 0) {
    throw Error(ErrorCode::kInvalidSpec, "epsilon must be positive");
  }
  for (std::int64_t point : eval_points) {
    if (point < 1) {
      throw Error(ErrorCode::kInvalidSpec, "eval points must be positive");
    }
  }
  for (const RankInterval& w : windows) {
    if (w.first < 1 || w.last < w.first) {
      throw Error(ErrorCode::kInvalidSpec, "window bounds must satisfy 1 <= first <= last");
    }
  }
}

std::vector<Rational> DefaultDeltaGrid() {
  std::vector<Rational> grid;
  for (int step = -3; step <= 4; ++step) grid.emplace_back(step, 20);
  return grid;
}

namespace {

Rational ProtectedP(const Dataset& dataset, const ExperimentConfig& config,
                    const Rational& delta) {
  return dataset.p_star.at(config.protected_group) + delta;
}

void CheckProportion(const Rational& p, const std::string& what) {
  if (p < 0 || p > 1) {
    throw Error(ErrorCode::kOutOfRangeProportion,
                what + " = " + ToString(p) + " is outside [0, 1]");
  }
}

// [p* - delta, p* + delta] clipped to [0, 1].
std::pair<Rational, Rational> ProportionalBounds(const Rational& p_star,
                                                 const Rational& delta) {
  return {std::max(Rational(0), p_star - delta),
          std::min(Rational(1), p_star + delta)};
}

PrefixConstraints DpConstraintsFor(const Dataset& dataset,
                                   const ExperimentConfig& config,
                                   std::int64_t k, const Rational& delta) {
  const std::size_t groups = dataset.p_star.size();
  switch (config.constraint_template) {
    case ConstraintTemplate::kLowerBound:
      return PrefixConstraintsFromDelta(
          dataset.p_star.at(config.protected_group), delta, k,
          BoundDirection::kLowerBound, groups, config.protected_group);
    case ConstraintTemplate::kUpperBound:
      return PrefixConstraintsFromDelta(
          dataset.p_star.at(config.protected_group), delta, k,
          BoundDirection::kUpperBound, groups, config.protected_group);
    case ConstraintTemplate::kProportional: {
      PrefixConstraints c = PrefixConstraints::Unconstrained(groups, k);
      for (GroupId g = 0; g < groups; ++g) {
        const auto [lo, hi] = ProportionalBounds(dataset.p_star[g], delta);
        for (std::int64_t prefix = 1; prefix <= k; ++prefix) {
          c.lower[g][prefix - 1] = Ceil(lo * prefix);
          c.upper[g][prefix - 1] = Floor(hi * prefix);
        }
      }
      return c;
    }
  }
  throw Error(ErrorCode::kInternalInvariantViolation, "unknown template");
}

// Appends every item not already present, in true order.
FairRanking PadWithTruth(FairRanking top, const TrueRanking& truth) {
  std::unordered_set<std::string_view> seen;
  for (const Item& item : top.items) seen.insert(item.id);
  std::vector<Item> rest;
  for (const Item& item : truth.items()) {
    if (!seen.contains(item.id)) rest.push_back(item);
  }
  top.items.insert(top.items.end(), rest.begin(), rest.end());
  return top;
}

std::string Fixed(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

std::string ModeName(const ExperimentConfig& config) {
  if (config.alg_mode == FairnessMode::kBlocks) return "blocks";
  return config.window_mode == WindowMode::kPrefix ? "prefix" : "windows";
}

}  // namespace

FairnessSpec AlgSpecFor(const Dataset& dataset, const ExperimentConfig& config,
                        const Rational& delta) {
  const std::size_t groups = dataset.p_star.size();
  FairnessSpec spec;
  spec.k = config.k;
  spec.mode = config.alg_mode;
  spec.epsilon_policy = config.epsilon_policy;
  if (config.alg_mode == FairnessMode::kConsecutiveWindows) {
    spec.epsilon = config.epsilon;
  }
  const Rational p = ProtectedP(dataset, config, delta);
  switch (config.constraint_template) {
    case ConstraintTemplate::kLowerBound:
      CheckProportion(p, "p* + delta");
      spec.alphas.assign(groups, Rational(1));
      spec.betas.assign(groups, Rational(0));
      spec.betas[config.protected_group] = p;
      break;
    case ConstraintTemplate::kUpperBound:
      CheckProportion(p, "p* + delta");
      spec.alphas.assign(groups, Rational(1));
      spec.betas.assign(groups, Rational(0));
      spec.alphas[config.protected_group] = p;
      break;
    case ConstraintTemplate::kProportional:
      for (GroupId g = 0; g < groups; ++g) {
        const auto [lo, hi] = ProportionalBounds(dataset.p_star[g], delta);
        spec.alphas.push_back(hi);
        spec.betas.push_back(lo);
      }
      break;
  }
  if (config.alg_mode == FairnessMode::kBlocks) {
    // Block fairness counts whole items; snap to the integer thresholds.
    for (GroupId g = 0; g < groups; ++g) {
      spec.alphas[g] = Rational(Floor(spec.alphas[g] * spec.k), spec.k);
      spec.betas[g] = Rational(Ceil(spec.betas[g] * spec.k), spec.k);
    }
  }
  return spec;
}

FairRanking RunAlgorithm(const Dataset& dataset, const ExperimentConfig& config,
                         Algorithm algorithm, const Rational& delta,
                         DerivedParams* params) {
  const TrueRanking& truth = dataset.ranking;
  switch (algorithm) {
    case Algorithm::kAlg: {
      AlgTrace trace = Rerank(truth, AlgSpecFor(dataset, config, delta));
      if (params != nullptr) *params = trace.params;
      return std::move(trace.final_ranking);
    }
    case Algorithm::kCelisDp: {
      DpResult result =
          CelisDp(truth, DpConstraintsFor(dataset, config, config.k, delta));
      return PadWithTruth(std::move(result.ranking), truth);
    }
    case Algorithm::kFairStar: {
      if (config.constraint_template != ConstraintTemplate::kLowerBound) {
        throw Error(ErrorCode::kInvalidSpec,
                    "FA*IR supports only minimum-representation constraints");
      }
      const Rational p = ProtectedP(dataset, config, delta);
      CheckProportion(p, "p* + delta");
      return PadWithTruth(FairStar(truth, config.protected_group, p, config.k,
                                   config.fair_rule),
                          truth);
    }
  }
  throw Error(ErrorCode::kInternalInvariantViolation, "unknown algorithm");
}

SweepResult RunSweep(const Dataset& dataset, const ExperimentConfig& config) {
  const TrueRanking& truth = dataset.ranking;
  config.Validate(truth.num_groups());
  SweepResult result;
  result.config = config;
  result.group_names = dataset.group_names;
  result.p_star = dataset.p_star;
  if (result.config.delta_grid.empty()) result.config.delta_grid = DefaultDeltaGrid();

  std::vector<RankInterval> windows;
  const auto n = static_cast<std::int64_t>(truth.size());
  if (config.window_mode == WindowMode::kPrefix) {
    for (std::int64_t point : config.eval_points) {
      if (point <= n) windows.push_back({1, point});
    }
  } else {
    for (const RankInterval& w : config.windows) {
      if (w.last <= n) windows.push_back(w);
    }
  }

  for (Algorithm algorithm : config.algorithms) {
    for (const Rational& delta : result.config.delta_grid) {
      SweepRow base;
      base.algorithm = algorithm;
      base.delta = delta;
      base.p = ProtectedP(dataset, config, delta);
      FairRanking ranking;
      DerivedParams params;
      try {
        ranking = RunAlgorithm(dataset, config, algorithm, delta, &params);
        base.status = "ok";
      } catch (const Error& e) {
        const bool unsupported =
            algorithm == Algorithm::kFairStar &&
            (config.constraint_template != ConstraintTemplate::kLowerBound ||
             truth.num_groups() != 2);
        base.status = unsupported ? "unsupported" : "infeasible";
        base.detail = e.what();
      }
      if (base.ok() && algorithm == Algorithm::kAlg) {
        base.epsilon = params.epsilon;
        base.bound = params.underranking_bound;
        base.guaranteed_prefix = config.alg_mode == FairnessMode::kBlocks
                                     ? params.guaranteed_blocks * config.k
                                     : params.guaranteed_prefix;
      }
      for (const RankInterval& window : windows) {
        SweepRow row = base;
        row.window = window;
        if (row.ok()) {
          for (GroupId g = 0; g < truth.num_groups(); ++g) {
            row.representation.push_back(
                Representation(ranking.items, g, window));
          }
          row.underranking = UnderrankingAt(ranking.items, truth, window.last);
          row.ndcg = NdcgAt(ranking.items, truth, window.last);
          row.precision = PrecisionAt(ranking.items, truth, window.last);
        }
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

void WriteSweepCsv(const SweepResult& result, std::ostream& out) {
  out << "dataset,algorithm,template,mode,delta,p,first,last,status,epsilon,"
         "bound,guaranteed_prefix,underranking,underranking_exact,ndcg,"
         "precision";
  for (const std::string& name : result.group_names) {
    out << "," << CsvField("rep_" + name);
  }
  out << ",detail\n";
  const ExperimentConfig& c = result.config;
  for (const SweepRow& row : result.rows) {
    out << CsvField(c.dataset_name) << "," << AlgorithmName(row.algorithm)
        << "," << TemplateName(c.constraint_template) << "," << ModeName(c)
        << "," << Fixed(ToDouble(row.delta), 4) << ","
        << Fixed(ToDouble(row.p)) << "," << row.window.first << ","
        << row.window.last << "," << row.status << ","
        << (row.epsilon ? Fixed(ToDouble(*row.epsilon)) : "") << ","
        << (row.bound ? Fixed(ToDouble(*row.bound)) : "") << ","
        << (row.guaranteed_prefix ? std::to_string(*row.guaranteed_prefix) : "")
        << ",";
    if (row.ok()) {
      out << Fixed(ToDouble(row.underranking)) << ","
          << ToString(row.underranking) << "," << Fixed(row.ndcg) << ","
          << row.precision;
    } else {
      out << ",,,";
    }
    for (std::size_t g = 0; g < result.group_names.size(); ++g) {
      out << ",";
      if (row.ok()) out << Fixed(ToDouble(row.representation[g]));
    }
    out << "," << CsvField(row.detail) << "\n";
  }
}

void WriteSweepJson(const SweepResult& result, std::ostream& out) {
  using nlohmann::ordered_json;
  const ExperimentConfig& c = result.config;
  ordered_json doc;
  doc["dataset"] = c.dataset_name;
  doc["template"] = TemplateName(c.constraint_template);
  doc["mode"] = ModeName(c);
  doc["k"] = c.k;
  doc["epsilon"] = ToString(c.epsilon);
  doc["seed"] = c.seed;
  doc["groups"] = ordered_json::array();
  for (std::size_t g = 0; g < result.group_names.size(); ++g) {
    doc["groups"].push_back({{"name", result.group_names[g]},
                             {"p_star", ToString(result.p_star[g])}});
  }
  doc["rows"] = ordered_json::array();
  for (const SweepRow& row : result.rows) {
    ordered_json r;
    r["algorithm"] = AlgorithmName(row.algorithm);
    r["delta"] = ToString(row.delta);
    r["p"] = ToString(row.p);
    r["first"] = row.window.first;
    r["last"] = row.window.last;
    r["status"] = row.status;
    if (!row.detail.empty()) r["detail"] = row.detail;
    if (row.epsilon) r["epsilon"] = ToString(*row.epsilon);
    if (row.bound) r["bound"] = ToString(*row.bound);
    if (row.guaranteed_prefix) r["guaranteed_prefix"] = *row.guaranteed_prefix;
    if (row.ok()) {
      r["underranking"] = ToString(row.underranking);
      r["ndcg"] = row.ndcg;
      r["precision"] = row.precision;
      ordered_json rep = ordered_json::array();
      for (const Rational& value : row.representation) rep.push_back(ToString(value));
      r["representation"] = rep;
    }
    doc["rows"].push_back(std::move(r));
  }
  out << doc.dump(2) << "\n";
}

std::vector<BenchRow> Bench(const Dataset& dataset,
                            const ExperimentConfig& config,
                            const std::vector<std::int64_t>& sizes, int runs) {
  std::vector<BenchRow> rows;
  for (Algorithm algorithm : config.algorithms) {
    for (std::int64_t k : sizes) {
      if (k <= 0) continue;
      ExperimentConfig at_k = config;
      at_k.k = k;
      BenchRow row;
      row.algorithm = algorithm;
      row.k = k;
      try {
        RunAlgorithm(dataset, at_k, algorithm, Rational(0));
        double total = 0.0;
        for (int r = 0; r < runs; ++r) {
          const auto start = std::chrono::steady_clock::now();
          RunAlgorithm(dataset, at_k, algorithm, Rational(0));
          const auto stop = std::chrono::steady_clock::now();
          total += std::chrono::duration<double>(stop - start).count();
        }
        row.runs = runs;
        row.mean_seconds = runs > 0 ? total / runs : 0.0;
        row.status = "ok";
      } catch (const Error& e) {
        row.status = "infeasible";
        row.detail = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void WriteBenchCsv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "algorithm,k,runs,mean_seconds,status,detail\n";
  for (const BenchRow& row : rows) {
    out << AlgorithmName(row.algorithm) << "," << row.k << "," << row.runs
        << "," << Fixed(row.mean_seconds, 9) << "," << row.status << ","
        << CsvField(row.detail) << "\n";
  }
}

void WriteBenchJson(const std::vector<BenchRow>& rows, std::ostream& out) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const BenchRow& row : rows) {
    nlohmann::ordered_json r;
    r["algorithm"] = AlgorithmName(row.algorithm);
    r["k"] = row.k;
    r["runs"] = row.runs;
    r["mean_seconds"] = row.mean_seconds;
    r["status"] = row.status;
    if (!row.detail.empty()) r["detail"] = row.detail;
    doc.push_back(std::move(r));
  }
  out << doc.dump(2) << "\n";
}

Dataset MakeSyntheticDataset(std::int64_t n,
                             const std::vector<double>& proportions,
                             std::uint64_t seed) {
  if (n < 0 || proportions.size() < 2) {
    throw Error(ErrorCode::kInvalidSpec,
                "synthetic data needs n >= 0 and at least two groups");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::discrete_distribution<std::size_t> group(proportions.begin(),
                                                proportions.end());
  std::vector<Item> items;
  items.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double s = score(rng);
    items.push_back(Item{"s" + std::to_string(i + 1), s, group(rng), s});
  }
  Dataset dataset;
  dataset.ranking = TrueRanking::FromUnsorted(std::move(items), proportions.size());
  for (std::size_t g = 0; g < proportions.size(); ++g) {
    dataset.group_names.push_back("group" + std::to_string(g + 1));
  }
  dataset.group_sizes = dataset.ranking.GroupSizes();
  for (std::int64_t size : dataset.group_sizes) {
    dataset.p_star.push_back(n > 0 ? Rational(size, n) : Rational(0));
  }
  return dataset;
}

}  // namespace fairrank
