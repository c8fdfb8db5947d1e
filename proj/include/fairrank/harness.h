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

#ifndef FAIRRANK_HARNESS_H_
#define FAIRRANK_HARNESS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fairrank/baselines.h"
#include "fairrank/data_io.h"
#include "fairrank/metrics.h"
#include "fairrank/model.h"
#include "fairrank/rational.h"

namespace fairrank {

enum class Algorithm { kAlg, kCelisDp, kFairStar };

std::string AlgorithmName(Algorithm algorithm);
// "alg", "dp" / "celis", "fair" / "fastar". Throws Error(kParseError).
Algorithm ParseAlgorithm(std::string_view name);

// How a grid point delta turns into constraints, with p = p*_protected + delta.
enum class ConstraintTemplate {
  // ALG (1,..,1)/(p,0,..); DP L = ceil(p k'); FA*IR with p.
  kLowerBound,
  // ALG (p,1,..)/(0,..); DP U = floor(p k'); FA*IR not applicable.
  kUpperBound,
  // Every group: ALG alpha = p*_l + delta, beta = p*_l - delta; DP
  // L = ceil(beta k'), U = floor(alpha k'); FA*IR not applicable.
  kProportional,
};

std::string TemplateName(ConstraintTemplate t);
ConstraintTemplate ParseTemplate(std::string_view name);

enum class WindowMode {
  kPrefix,       // evaluate ranks 1..k' for each eval point
  kConsecutive,  // evaluate each window in ExperimentConfig::windows
};

struct ExperimentConfig {
  std::string dataset_name;
  std::vector<Algorithm> algorithms = {Algorithm::kAlg, Algorithm::kCelisDp,
                                       Algorithm::kFairStar};
  ConstraintTemplate constraint_template = ConstraintTemplate::kLowerBound;
  std::vector<Rational> delta_grid;
  std::int64_t k = 100;
  std::vector<std::int64_t> eval_points = {20, 40, 100};
  WindowMode window_mode = WindowMode::kPrefix;
  std::vector<RankInterval> windows = {{1, 20}, {21, 60}, {61, 100}};
  Rational epsilon{2, 5};
  FairnessMode alg_mode = FairnessMode::kConsecutiveWindows;
  // How ALG treats an epsilon below the minimum; sweeps clamp by default.
  EpsilonPolicy epsilon_policy = EpsilonPolicy::kClamp;
  GroupId protected_group = 0;
  FairStarRule fair_rule = FairStarRule::Floor();
  std::uint64_t seed = 0;

  // Throws Error(kInvalidSpec).
  void Validate(std::size_t num_groups) const;
};

// -0.15, -0.10, ..., 0.20
std::vector<Rational> DefaultDeltaGrid();

struct SweepRow {
  Algorithm algorithm = Algorithm::kAlg;
  Rational delta;
  Rational p;
  RankInterval window;
  // "ok", "infeasible" or "unsupported"; detail names the failed check.
  std::string status;
  std::string detail;
  std::vector<Rational> representation;  // per group over `window`
  Rational underranking;                 // underranking_at(window.last)
  double ndcg = 0.0;                     // ndcg_at(window.last)
  std::int64_t precision = 0;            // precision@(window.last)
  // ALG only.
  std::optional<Rational> epsilon;
  std::optional<Rational> bound;
  std::optional<std::int64_t> guaranteed_prefix;

  bool ok() const { return status == "ok"; }
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<std::string> group_names;
  std::vector<Rational> p_star;
  std::vector<SweepRow> rows;  // ordered by (algorithm, delta, window)
};

// Runs every (algorithm, delta) pair and evaluates it at every eval point or
// window. Baseline top-k outputs are padded with the remaining items in true
// order before evaluation. Points that cannot run are recorded, not thrown.
SweepResult RunSweep(const Dataset& dataset, const ExperimentConfig& config);

// Columns: dataset,algorithm,template,mode,delta,p,first,last,status,epsilon,
// bound,guaranteed_prefix,underranking,underranking_exact,ndcg,precision,
// rep_<group>...,detail
void WriteSweepCsv(const SweepResult& result, std::ostream& out);
void WriteSweepJson(const SweepResult& result, std::ostream& out);

struct BenchRow {
  Algorithm algorithm = Algorithm::kAlg;
  std::int64_t k = 0;
  int runs = 0;
  double mean_seconds = 0.0;
  std::string status;
  std::string detail;
};

// Mean wall clock over `runs` timed runs after one untimed warm-up, with
// delta = 0 under the config's template. Sizes k <= 0 are skipped.
std::vector<BenchRow> Bench(const Dataset& dataset,
                            const ExperimentConfig& config,
                            const std::vector<std::int64_t>& sizes,
                            int runs = 5);

void WriteBenchCsv(const std::vector<BenchRow>& rows, std::ostream& out);
void WriteBenchJson(const std::vector<BenchRow>& rows, std::ostream& out);

// Items with uniform scores and groups drawn with the given proportions from
// a fixed-seed generator. Ids are "s<index>".
Dataset MakeSyntheticDataset(std::int64_t n,
                             const std::vector<double>& proportions,
                             std::uint64_t seed);

// The full ranking an algorithm produces for one delta; exposed for tests and
// the CLI. Throws Error.
FairRanking RunAlgorithm(const Dataset& dataset, const ExperimentConfig& config,
                         Algorithm algorithm, const Rational& delta,
                         DerivedParams* params = nullptr);

// ALG spec for one delta under the config's template.
FairnessSpec AlgSpecFor(const Dataset& dataset, const ExperimentConfig& config,
                        const Rational& delta);

}  // namespace fairrank

#endif  // FAIRRANK_HARNESS_H_
