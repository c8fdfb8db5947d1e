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

// Command-line front end: rerank, audit, sweep, lowerbound, bench.
//
// Exit status: 0 success, 1 validation error or failed audit, 2 infeasible.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "fairrank/alg.h"
#include "fairrank/data_io.h"
#include "fairrank/error.h"
#include "fairrank/harness.h"
#include "fairrank/metrics.h"
#include "fairrank/model.h"
#include "fairrank/rational.h"
#include "fairrank/verify.h"
#include "json.hpp"

namespace {

using fairrank::Error;
using fairrank::ErrorCode;
using fairrank::Rational;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;

struct Options {
  std::string dataset;
  std::string schema;
  std::string algo = "alg";
  std::string algos = "alg,dp,fair";
  std::string alpha;
  std::string beta;
  std::string k = "100";
  std::string epsilon = "0.4";
  std::string delta = "0";
  std::string delta_grid = "-0.15:0.2:0.05";
  std::string eval_points = "20,40,100";
  std::string mode = "windows";
  std::string template_name = "lower";
  std::string protected_group = "1";
  std::string fair_rule = "floor";
  std::string ranking;
  std::string sizes = "100,300,500,1000";
  std::string out;
  std::string format = "csv";
  std::int64_t n = 4;
  std::int64_t prefix = -1;
  int runs = 5;
  std::uint64_t seed = 0;
  bool reverse_scores = false;
  bool force_epsilon = false;
  bool raw_gain = false;
  bool brute_force = false;
};

std::vector<std::string> SplitList(const std::string& text, char sep = ',') {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::vector<Rational> ParseRationalList(const std::string& text) {
  std::vector<Rational> values;
  for (const std::string& part : SplitList(text)) {
    values.push_back(fairrank::ParseRational(part));
  }
  return values;
}

std::vector<std::int64_t> ParseIntList(const std::string& text) {
  std::vector<std::int64_t> values;
  for (const Rational& r : ParseRationalList(text)) {
    if (!fairrank::IsIntegral(r)) {
      throw Error(ErrorCode::kParseError, "'" + text + "' is not an integer list");
    }
    values.push_back(r.numerator());
  }
  return values;
}

std::int64_t ParseInt(const std::string& text) {
  const std::vector<std::int64_t> v = ParseIntList(text);
  if (v.size() != 1) {
    throw Error(ErrorCode::kParseError, "'" + text + "' is not an integer");
  }
  return v[0];
}

// "a,b,c" or "start:stop:step" (inclusive).
std::vector<Rational> ParseGrid(const std::string& text) {
  if (text.find(':') == std::string::npos) return ParseRationalList(text);
  const std::vector<std::string> parts = SplitList(text, ':');
  if (parts.size() != 3) {
    throw Error(ErrorCode::kParseError, "grid must be start:stop:step");
  }
  const Rational start = fairrank::ParseRational(parts[0]);
  const Rational stop = fairrank::ParseRational(parts[1]);
  const Rational step = fairrank::ParseRational(parts[2]);
  if (step <= 0) throw Error(ErrorCode::kParseError, "grid step must be positive");
  std::vector<Rational> grid;
  for (Rational x = start; x <= stop; x += step) grid.push_back(x);
  return grid;
}

fairrank::FairnessMode AlgMode(const Options& o) {
  if (o.mode == "blocks") return fairrank::FairnessMode::kBlocks;
  if (o.mode == "windows" || o.mode == "prefix") {
    return fairrank::FairnessMode::kConsecutiveWindows;
  }
  throw Error(ErrorCode::kParseError, "--mode must be prefix, windows or blocks");
}

fairrank::Dataset LoadData(const Options& o) {
  if (o.dataset.starts_with("synthetic:")) {
    const std::vector<std::string> parts = SplitList(o.dataset, ':');
    std::vector<double> proportions = {0.5, 0.5};
    if (parts.size() > 2) {
      proportions.clear();
      for (const Rational& p : ParseRationalList(parts[2])) {
        proportions.push_back(fairrank::ToDouble(p));
      }
    }
    if (parts.size() < 2) {
      throw Error(ErrorCode::kParseError, "use synthetic:N[:p1,p2,...]");
    }
    return fairrank::MakeSyntheticDataset(ParseInt(parts[1]), proportions, o.seed);
  }
  if (o.dataset.empty() || o.schema.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "--dataset and --schema are required");
  }
  fairrank::LoadOptions load;
  load.reverse_scores = o.reverse_scores;
  load.normalize_gain = !o.raw_gain;
  return fairrank::LoadDataset(o.dataset, fairrank::LoadSchema(o.schema), load);
}

fairrank::GroupId ParseGroup(const std::string& text,
                             const std::vector<std::string>& names) {
  for (std::size_t g = 0; g < names.size(); ++g) {
    if (names[g] == text) return g;
  }
  const std::int64_t index = ParseInt(text);
  if (index < 1 || static_cast<std::size_t>(index) > names.size()) {
    throw Error(ErrorCode::kInvalidSpec, "no group '" + text + "'");
  }
  return static_cast<fairrank::GroupId>(index - 1);
}

fairrank::FairnessSpec SpecFromFlags(const Options& o) {
  fairrank::FairnessSpec spec;
  spec.alphas = ParseRationalList(o.alpha);
  spec.betas = ParseRationalList(o.beta);
  spec.k = ParseInt(o.k);
  spec.mode = AlgMode(o);
  if (spec.mode == fairrank::FairnessMode::kConsecutiveWindows) {
    spec.epsilon = fairrank::ParseRational(o.epsilon);
  }
  spec.epsilon_policy = o.force_epsilon ? fairrank::EpsilonPolicy::kForce
                                        : fairrank::EpsilonPolicy::kReject;
  return spec;
}

fairrank::ExperimentConfig ConfigFromFlags(const Options& o,
                                           const fairrank::Dataset& data) {
  fairrank::ExperimentConfig c;
  c.dataset_name = o.dataset;
  c.algorithms.clear();
  for (const std::string& name : SplitList(o.algos)) {
    c.algorithms.push_back(fairrank::ParseAlgorithm(name));
  }
  c.constraint_template = fairrank::ParseTemplate(o.template_name);
  c.delta_grid = ParseGrid(o.delta_grid);
  c.k = ParseInt(o.k);
  c.eval_points = ParseIntList(o.eval_points);
  c.window_mode = o.mode == "prefix" ? fairrank::WindowMode::kPrefix
                                     : fairrank::WindowMode::kConsecutive;
  if (o.mode == "blocks") c.window_mode = fairrank::WindowMode::kPrefix;
  c.alg_mode = AlgMode(o);
  c.epsilon = fairrank::ParseRational(o.epsilon);
  c.epsilon_policy = o.force_epsilon ? fairrank::EpsilonPolicy::kForce
                                     : fairrank::EpsilonPolicy::kClamp;
  c.protected_group = ParseGroup(o.protected_group, data.group_names);
  if (o.fair_rule == "binomial") {
    c.fair_rule = fairrank::FairStarRule::Binomial();
  } else if (o.fair_rule != "floor") {
    throw Error(ErrorCode::kParseError, "--fair-rule must be floor or binomial");
  }
  c.seed = o.seed;
  return c;
}

// Writes to --out, or stdout when it is empty.
void Emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write '" + o.out + "'");
  file << text;
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  file << text;
}

std::string Shortest(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc() ? std::string(buf, end) : std::to_string(value);
}

std::string RankingCsv(const std::vector<fairrank::Item>& items,
                       const fairrank::TrueRanking& truth,
                       const std::vector<std::string>& names) {
  std::unordered_map<std::string, std::size_t> true_rank;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    true_rank.emplace(truth.items()[i].id, i + 1);
  }
  std::ostringstream out;
  out << "rank,id,group,group_name,score,true_rank\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    const fairrank::Item& item = items[i];
    out << i + 1 << "," << item.id << "," << item.group + 1 << ","
        << names[item.group] << "," << Shortest(item.score) << ","
        << true_rank.at(item.id) << "\n";
  }
  return out.str();
}

ordered_json AuditJson(const fairrank::AuditReport& report) {
  ordered_json j;
  j["passed"] = report.passed();
  j["windows_checked"] = report.windows_checked;
  j["violations"] = ordered_json::array();
  for (const fairrank::FairnessViolation& v : report.violations) {
    j["violations"].push_back(
        {{"first", v.first_rank},
         {"last", v.last_rank},
         {"group", v.group + 1},
         {"kind", v.kind == fairrank::FairnessViolation::Kind::kAboveUpper
                      ? "above_upper"
                      : "below_lower"},
         {"observed", v.observed},
         {"required", fairrank::ToString(v.required)}});
  }
  return j;
}

int RunRerank(const Options& o) {
  const fairrank::Dataset data = LoadData(o);
  const fairrank::TrueRanking& truth = data.ranking;
  const fairrank::Algorithm algorithm = fairrank::ParseAlgorithm(o.algo);
  fairrank::FairRanking ranking;
  ordered_json cert;
  cert["algorithm"] = fairrank::AlgorithmName(algorithm);
  bool certified = true;
  if (algorithm == fairrank::Algorithm::kAlg) {
    const fairrank::FairnessSpec spec = SpecFromFlags(o);
    fairrank::AlgTrace trace = fairrank::Rerank(truth, spec);
    ranking = trace.final_ranking;
    const fairrank::DerivedParams& p = trace.params;
    cert["mode"] = spec.mode == fairrank::FairnessMode::kBlocks ? "blocks" : "windows";
    cert["k"] = spec.k;
    cert["epsilon"] = fairrank::ToString(p.epsilon);
    if (p.epsilon_min) cert["epsilon_min"] = fairrank::ToString(*p.epsilon_min);
    cert["block_size"] = p.block_size;
    cert["items_per_block"] = p.items_per_block;
    cert["guarantees_void"] = p.guarantees_void;
    // The audit is recomputed from the output alone.
    fairrank::AuditReport audit;
    if (spec.mode == fairrank::FairnessMode::kBlocks) {
      cert["guaranteed_blocks"] = p.guaranteed_blocks;
      audit = fairrank::AuditBlocks(ranking.items, spec, p.guaranteed_blocks);
    } else {
      cert["guaranteed_prefix"] = p.guaranteed_prefix;
      audit = fairrank::AuditConsecutive(ranking.items, spec, p.guaranteed_prefix,
                                         p.epsilon);
    }
    cert["audit"] = AuditJson(audit);
    const Rational observed = fairrank::ObservedUnderranking(ranking.items, truth);
    cert["underranking"] = fairrank::ToString(observed);
    if (p.underranking_bound) {
      cert["underranking_bound"] = fairrank::ToString(*p.underranking_bound);
      cert["underranking_within_bound"] = observed <= *p.underranking_bound;
      certified = certified && observed <= *p.underranking_bound;
    }
    certified = certified && audit.passed();
    // A forced epsilon has nothing to certify; the run itself succeeded.
    if (p.guarantees_void) cert["certified"] = false;
  } else {
    fairrank::ExperimentConfig c = ConfigFromFlags(o, data);
    const Rational delta = fairrank::ParseRational(o.delta);
    ranking = fairrank::RunAlgorithm(data, c, algorithm, delta);
    cert["template"] = fairrank::TemplateName(c.constraint_template);
    cert["delta"] = fairrank::ToString(delta);
    cert["underranking"] =
        fairrank::ToString(fairrank::ObservedUnderranking(ranking.items, truth));
  }
  fairrank::CheckIsPermutation(ranking.items, truth);
  cert["permutation"] = true;
  if (!cert.contains("certified")) cert["certified"] = certified;

  if (o.format == "json") {
    ordered_json doc;
    doc["certificate"] = cert;
    doc["ranking"] = ordered_json::array();
    for (const fairrank::Item& item : ranking.items) {
      doc["ranking"].push_back({{"id", item.id},
                                {"group", item.group + 1},
                                {"group_name", data.group_names[item.group]},
                                {"score", item.score}});
    }
    Emit(o, doc.dump(2) + "\n");
  } else {
    Emit(o, RankingCsv(ranking.items, truth, data.group_names));
    if (!o.out.empty()) {
      WriteFile(o.out + ".cert.json", cert.dump(2) + "\n");
    } else {
      std::cerr << cert.dump(2) << "\n";
    }
  }
  if (!certified) {
    std::cerr << "certificate failed\n";
    return kExitInvalid;
  }
  return kExitOk;
}

int RunAudit(const Options& o) {
  if (o.ranking.empty()) throw Error(ErrorCode::kInvalidSpec, "--ranking is required");
  const fairrank::CsvTable table = fairrank::ReadCsvFile(o.ranking);
  const std::size_t id_col = table.ColumnIndex("id");
  const std::size_t group_col = table.ColumnIndex("group");
  const fairrank::FairnessSpec spec = SpecFromFlags(o);
  std::vector<fairrank::Item> items;
  for (const auto& row : table.rows) {
    const std::int64_t g = ParseInt(row[group_col]);
    if (g < 1 || static_cast<std::size_t>(g) > spec.num_groups()) {
      throw Error(ErrorCode::kInvalidRanking,
                  "item '" + row[id_col] + "' has group " + row[group_col]);
    }
    items.push_back(fairrank::MakeItem(row[id_col], 0.0,
                                       static_cast<fairrank::GroupId>(g - 1)));
  }
  const auto n = static_cast<std::int64_t>(items.size());
  fairrank::AuditReport report;
  ordered_json j;
  if (spec.mode == fairrank::FairnessMode::kBlocks) {
    const std::int64_t blocks = o.prefix >= 0 ? o.prefix : n / spec.k;
    report = fairrank::AuditBlocks(items, spec, blocks);
    j["blocks"] = blocks;
  } else {
    const std::int64_t prefix = o.prefix >= 0 ? o.prefix : n;
    report = fairrank::AuditConsecutive(items, spec, prefix, *spec.epsilon);
    j["prefix"] = prefix;
  }
  j["audit"] = AuditJson(report);
  if (o.format == "json") {
    Emit(o, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "first,last,group,kind,observed,required\n";
    for (const fairrank::FairnessViolation& v : report.violations) {
      out << v.first_rank << "," << v.last_rank << "," << v.group + 1 << ","
          << (v.kind == fairrank::FairnessViolation::Kind::kAboveUpper
                  ? "above_upper"
                  : "below_lower")
          << "," << v.observed << "," << fairrank::ToString(v.required) << "\n";
    }
    Emit(o, out.str());
  }
  std::cerr << report.Summary() << "\n";
  return report.passed() ? kExitOk : kExitInvalid;
}

int RunSweepCommand(const Options& o) {
  const fairrank::Dataset data = LoadData(o);
  const fairrank::ExperimentConfig config = ConfigFromFlags(o, data);
  const fairrank::SweepResult result = fairrank::RunSweep(data, config);
  std::ostringstream out;
  if (o.format == "json") {
    fairrank::WriteSweepJson(result, out);
  } else {
    fairrank::WriteSweepCsv(result, out);
  }
  Emit(o, out.str());
  return kExitOk;
}

int RunLowerBound(const Options& o) {
  fairrank::FairnessSpec spec = SpecFromFlags(o);
  spec.mode = fairrank::FairnessMode::kBlocks;
  spec.epsilon.reset();
  const Rational bound = fairrank::LowerBoundValue(spec);
  const fairrank::AdversarialInstance instance =
      fairrank::MakeAdversarialInstance(spec, o.n);
  const fairrank::GuaranteeRegimes regimes = fairrank::ClassifySpec(spec);
  ordered_json j;
  j["lower_bound"] = fairrank::ToString(bound);
  j["l_hat"] = instance.l_hat + 1;
  j["n"] = instance.n;
  j["k"] = spec.k;
  j["preconditions_hold"] = regimes.lower_bound;
  try {
    const fairrank::AlgTrace trace = fairrank::Rerank(instance.true_ranking, spec);
    j["alg_underranking"] = fairrank::ToString(fairrank::ObservedUnderranking(
        trace.final_ranking.items, instance.true_ranking));
    j["alg_blocks"] = trace.params.guaranteed_blocks;
    if (o.brute_force) {
      j["brute_force_min"] = fairrank::ToString(fairrank::BruteForceMinUnderranking(
          instance.true_ranking, spec, trace.params.guaranteed_blocks));
    }
  } catch (const Error& e) {
    j["alg_error"] = e.what();
  }
  std::ostringstream csv;
  csv << "rank,id,group,score\n";
  for (std::size_t i = 0; i < instance.true_ranking.size(); ++i) {
    const fairrank::Item& item = instance.true_ranking.items()[i];
    csv << i + 1 << "," << item.id << "," << item.group + 1 << ","
        << Shortest(item.score) << "\n";
  }
  if (!o.out.empty()) {
    WriteFile(o.out, csv.str());
    j["instance_file"] = o.out;
  }
  if (o.format == "json" || !o.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << csv.str();
    std::cerr << j.dump(2) << "\n";
  }
  return kExitOk;
}

int RunBench(const Options& o) {
  const fairrank::Dataset data = LoadData(o);
  const fairrank::ExperimentConfig config = ConfigFromFlags(o, data);
  const std::vector<fairrank::BenchRow> rows =
      fairrank::Bench(data, config, ParseIntList(o.sizes), o.runs);
  std::ostringstream out;
  if (o.format == "json") {
    fairrank::WriteBenchJson(rows, out);
  } else {
    fairrank::WriteBenchCsv(rows, out);
  }
  Emit(o, out.str());
  return kExitOk;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasible:
    case ErrorCode::kNoFeasibleRanking:
    case ErrorCode::kInsufficientProtectedItems:
      return kExitInfeasible;
    default:
      return kExitInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair re-ranking with group fairness and underranking bounds"};
  app.require_subcommand(1);
  Options o;

  auto data_flags = [&o](CLI::App* cmd) {
    cmd->add_option("--dataset", o.dataset,
                    "Delimited file, or synthetic:N[:p1,p2,...]");
    cmd->add_option("--schema", o.schema, "Schema JSON");
    cmd->add_flag("--reverse-scores", o.reverse_scores,
                  "Rank by the opposite score direction");
    cmd->add_flag("--raw-gain", o.raw_gain,
                  "Use raw scores as nDCG relevance instead of min-max scaled");
    cmd->add_option("--seed", o.seed, "Seed for synthetic data");
  };
  auto spec_flags = [&o](CLI::App* cmd) {
    cmd->add_option("--alpha", o.alpha, "Upper proportions, comma separated");
    cmd->add_option("--beta", o.beta, "Lower proportions, comma separated");
    cmd->add_option("--k", o.k, "Window or block size");
    cmd->add_option("--epsilon", o.epsilon, "Window slack");
    cmd->add_option("--mode", o.mode, "prefix | windows | blocks")
        ->check(CLI::IsMember({"prefix", "windows", "blocks"}));
    cmd->add_flag("--force-epsilon", o.force_epsilon,
                  "Run with an epsilon below the minimum; guarantees void");
  };
  auto output_flags = [&o](CLI::App* cmd) {
    cmd->add_option("--out", o.out, "Output path (stdout when omitted)");
    cmd->add_option("--format", o.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto template_flags = [&o](CLI::App* cmd) {
    cmd->add_option("--template", o.template_name, "lower | upper | proportional");
    cmd->add_option("--protected", o.protected_group,
                    "Protected group, 1-based index or name");
    cmd->add_option("--fair-rule", o.fair_rule, "floor | binomial");
  };

  CLI::App* rerank = app.add_subcommand("rerank", "Re-rank a dataset and certify it");
  data_flags(rerank);
  spec_flags(rerank);
  output_flags(rerank);
  template_flags(rerank);
  rerank->add_option("--algo", o.algo, "alg | dp | fair");
  rerank->add_option("--delta", o.delta, "Template slack for dp and fair");

  CLI::App* audit = app.add_subcommand("audit", "Check a ranking file");
  spec_flags(audit);
  output_flags(audit);
  audit->add_option("--ranking", o.ranking, "CSV with id and 1-based group");
  audit->add_option("--prefix", o.prefix,
                    "Ranks (windows) or blocks (blocks mode) to check");

  CLI::App* sweep = app.add_subcommand("sweep", "Delta sweep");
  data_flags(sweep);
  spec_flags(sweep);
  output_flags(sweep);
  template_flags(sweep);
  sweep->add_option("--algo", o.algos, "Comma separated: alg,dp,fair");
  sweep->add_option("--delta-grid", o.delta_grid, "start:stop:step or a list");
  sweep->add_option("--eval-points", o.eval_points, "Prefix lengths k'");

  CLI::App* lower = app.add_subcommand("lowerbound", "Emit the adversarial instance");
  spec_flags(lower);
  output_flags(lower);
  lower->add_option("--n", o.n, "Items per group");
  lower->add_flag("--brute-force", o.brute_force,
                  "Also compute the exact minimum (small instances)");

  CLI::App* bench = app.add_subcommand("bench", "Timing table");
  data_flags(bench);
  spec_flags(bench);
  output_flags(bench);
  template_flags(bench);
  bench->add_option("--algo", o.algos, "Comma separated: alg,dp,fair");
  bench->add_option("--sizes", o.sizes, "Values of k");
  bench->add_option("--runs", o.runs, "Timed runs per point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (rerank->parsed()) return RunRerank(o);
    if (audit->parsed()) return RunAudit(o);
    if (sweep->parsed()) return RunSweepCommand(o);
    if (lower->parsed()) return RunLowerBound(o);
    if (bench->parsed()) return RunBench(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what()
              << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
