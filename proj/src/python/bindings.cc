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

// Python bindings. Rationals cross the boundary as fractions.Fraction.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include <string>
#include <vector>

#include "fairrank/alg.h"
#include "fairrank/baselines.h"
#include "fairrank/data_io.h"
#include "fairrank/error.h"
#include "fairrank/harness.h"
#include "fairrank/metrics.h"
#include "fairrank/model.h"
#include "fairrank/rational.h"
#include "fairrank/verify.h"

namespace py = pybind11;

namespace pybind11::detail {

// int, str ("3/20", "0.15") and Fraction convert to Rational; Rational
// converts to Fraction. Floats are rejected to keep thresholds exact.
template <>
struct type_caster<fairrank::Rational> {
  PYBIND11_TYPE_CASTER(fairrank::Rational, const_name("fractions.Fraction"));

  bool load(handle src, bool) {
    if (PyBool_Check(src.ptr())) return false;
    try {
      if (PyLong_Check(src.ptr())) {
        value = fairrank::Rational(src.cast<std::int64_t>());
        return true;
      }
      if (PyUnicode_Check(src.ptr())) {
        value = fairrank::ParseRational(src.cast<std::string>());
        return true;
      }
      const object fraction = module_::import("fractions").attr("Fraction");
      if (isinstance(src, fraction)) {
        value = fairrank::Rational(src.attr("numerator").cast<std::int64_t>(),
                                   src.attr("denominator").cast<std::int64_t>());
        return true;
      }
    } catch (const fairrank::Error&) {
      return false;
    } catch (const error_already_set&) {
      return false;
    } catch (const cast_error&) {
      return false;
    }
    return false;
  }

  static handle cast(const fairrank::Rational& r, return_value_policy, handle) {
    const object fraction = module_::import("fractions").attr("Fraction");
    return fraction(r.numerator(), r.denominator()).release();
  }
};

}  // namespace pybind11::detail

namespace fairrank {
namespace {

std::vector<Item> ToItems(const TrueRanking& truth) {
  return {truth.items().begin(), truth.items().end()};
}

py::dict ParamsDict(const DerivedParams& p) {
  py::dict d;
  d["epsilon"] = p.epsilon;
  d["block_size"] = p.block_size;
  d["items_per_block"] = p.items_per_block;
  d["num_slots"] = p.num_slots;
  d["num_items"] = p.num_items;
  d["min_group_size"] = p.min_group_size;
  d["underranking_bound"] = p.underranking_bound;
  d["guaranteed_prefix"] = p.guaranteed_prefix;
  d["guaranteed_blocks"] = p.guaranteed_blocks;
  d["l_star"] = p.l_star;
  d["guarantees_void"] = p.guarantees_void;
  return d;
}

FairnessSpec MakeSpec(std::vector<Rational> alphas, std::vector<Rational> betas,
                      std::int64_t k, std::optional<Rational> epsilon,
                      const std::string& mode, const std::string& policy) {
  FairnessSpec spec;
  spec.alphas = std::move(alphas);
  spec.betas = std::move(betas);
  spec.k = k;
  spec.epsilon = epsilon;
  if (mode == "windows") {
    spec.mode = FairnessMode::kConsecutiveWindows;
  } else if (mode == "blocks") {
    spec.mode = FairnessMode::kBlocks;
  } else {
    throw Error(ErrorCode::kInvalidSpec, "mode must be windows or blocks");
  }
  if (policy == "reject") {
    spec.epsilon_policy = EpsilonPolicy::kReject;
  } else if (policy == "clamp") {
    spec.epsilon_policy = EpsilonPolicy::kClamp;
  } else if (policy == "force") {
    spec.epsilon_policy = EpsilonPolicy::kForce;
  } else {
    throw Error(ErrorCode::kInvalidSpec, "policy must be reject, clamp or force");
  }
  return spec;
}

py::dict RowDict(const SweepRow& row) {
  py::dict d;
  d["algorithm"] = AlgorithmName(row.algorithm);
  d["delta"] = row.delta;
  d["p"] = row.p;
  d["first"] = row.window.first;
  d["last"] = row.window.last;
  d["status"] = row.status;
  d["detail"] = row.detail;
  d["representation"] = row.representation;
  d["underranking"] = row.underranking;
  d["ndcg"] = row.ndcg;
  d["precision"] = row.precision;
  d["epsilon"] = row.epsilon;
  d["bound"] = row.bound;
  d["guaranteed_prefix"] = row.guaranteed_prefix;
  return d;
}

}  // namespace
}  // namespace fairrank

PYBIND11_MODULE(_core, m) {
  using namespace fairrank;
  m.doc() = "Fair re-ranking with exact rational constraints";

  static py::exception<Error> error(m, "FairrankError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error.ptr())(e.what());
      exc.attr("code") = std::string(ErrorCodeName(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<Item>(m, "Item")
      .def(py::init([](std::string id, double score, GroupId group,
                       std::optional<double> relevance) {
             return Item{std::move(id), score, group, relevance.value_or(score)};
           }),
           py::arg("id"), py::arg("score"), py::arg("group"),
           py::arg("relevance") = py::none())
      .def_readwrite("id", &Item::id)
      .def_readwrite("score", &Item::score)
      .def_readwrite("group", &Item::group)
      .def_readwrite("relevance", &Item::relevance)
      .def("__repr__", [](const Item& i) {
        return "Item(" + i.id + ", group=" + std::to_string(i.group) + ")";
      });

  py::class_<TrueRanking>(m, "TrueRanking")
      .def(py::init<std::vector<Item>, std::size_t>(), py::arg("items"),
           py::arg("num_groups"))
      .def_static("from_unsorted", &TrueRanking::FromUnsorted, py::arg("items"),
                  py::arg("num_groups"))
      .def("items", &ToItems)
      .def("__len__", &TrueRanking::size)
      .def_property_readonly("num_groups", &TrueRanking::num_groups)
      .def("group_sizes", &TrueRanking::GroupSizes);

  py::class_<FairnessSpec>(m, "FairnessSpec")
      .def(py::init(&MakeSpec), py::arg("alphas"), py::arg("betas"),
           py::arg("k"), py::arg("epsilon") = py::none(),
           py::arg("mode") = "windows", py::arg("policy") = "reject")
      .def_readwrite("alphas", &FairnessSpec::alphas)
      .def_readwrite("betas", &FairnessSpec::betas)
      .def_readwrite("k", &FairnessSpec::k)
      .def_readwrite("epsilon", &FairnessSpec::epsilon);

  m.def("minimum_epsilon", &MinimumEpsilon, py::arg("spec"));
  m.def("derive_params",
        [](const FairnessSpec& spec, const std::vector<std::int64_t>& sizes) {
          return ParamsDict(DeriveParams(spec, sizes));
        },
        py::arg("spec"), py::arg("group_sizes"));
  m.def("rerank",
        [](const TrueRanking& truth, const FairnessSpec& spec) {
          AlgTrace trace = Rerank(truth, spec);
          return py::make_tuple(trace.final_ranking.items, ParamsDict(trace.params));
        },
        py::arg("truth"), py::arg("spec"),
        "Returns (items in output order, derived parameters).");

  m.def("representation",
        [](const std::vector<Item>& r, GroupId g, std::int64_t first,
           std::int64_t last) { return Representation(r, g, {first, last}); },
        py::arg("ranking"), py::arg("group"), py::arg("first"), py::arg("last"));
  m.def("underranking_at",
        [](const std::vector<Item>& r, const TrueRanking& t, std::int64_t k) {
          return UnderrankingAt(r, t, k);
        },
        py::arg("ranking"), py::arg("truth"), py::arg("k_prime"));
  m.def("observed_underranking",
        [](const std::vector<Item>& r, const TrueRanking& t) {
          return ObservedUnderranking(r, t);
        },
        py::arg("ranking"), py::arg("truth"));
  m.def("ndcg_at",
        [](const std::vector<Item>& r, const TrueRanking& t, std::int64_t k) {
          return NdcgAt(r, t, k);
        },
        py::arg("ranking"), py::arg("truth"), py::arg("k_prime"));
  m.def("precision_at",
        [](const std::vector<Item>& r, const TrueRanking& t, std::int64_t k) {
          return PrecisionAt(r, t, k);
        },
        py::arg("ranking"), py::arg("truth"), py::arg("k_prime"));

  m.def("audit_blocks",
        [](const std::vector<Item>& r, const FairnessSpec& spec,
           std::int64_t blocks) {
          const AuditReport report = AuditBlocks(r, spec, blocks);
          return py::make_tuple(report.passed(), report.Summary());
        },
        py::arg("ranking"), py::arg("spec"), py::arg("num_blocks"));
  m.def("audit_consecutive",
        [](const std::vector<Item>& r, const FairnessSpec& spec,
           std::int64_t prefix, const Rational& epsilon) {
          const AuditReport report = AuditConsecutive(r, spec, prefix, epsilon);
          return py::make_tuple(report.passed(), report.Summary());
        },
        py::arg("ranking"), py::arg("spec"), py::arg("prefix_len"),
        py::arg("epsilon"));

  m.def("lower_bound_value", &LowerBoundValue, py::arg("spec"));
  m.def("adversarial_instance",
        [](const FairnessSpec& spec, std::int64_t n) {
          return MakeAdversarialInstance(spec, n).true_ranking;
        },
        py::arg("spec"), py::arg("n"));
  m.def("brute_force_min_underranking",
        [](const TrueRanking& truth, const FairnessSpec& spec,
           std::int64_t blocks) {
          return BruteForceMinUnderranking(truth, spec, blocks);
        },
        py::arg("truth"), py::arg("spec"), py::arg("num_blocks"));

  m.def("celis_dp",
        [](const TrueRanking& truth, std::int64_t k,
           std::vector<std::vector<std::int64_t>> lower,
           std::vector<std::vector<std::int64_t>> upper) {
          PrefixConstraints c{k, std::move(lower), std::move(upper)};
          DpResult result = CelisDp(truth, c);
          return py::make_tuple(result.ranking.items, result.utility);
        },
        py::arg("truth"), py::arg("k"), py::arg("lower"), py::arg("upper"));
  m.def("fair_star",
        [](const TrueRanking& truth, GroupId group, const Rational& p,
           std::int64_t k, std::optional<double> significance) {
          const FairStarRule rule = significance
                                        ? FairStarRule::Binomial(*significance)
                                        : FairStarRule::Floor();
          return FairStar(truth, group, p, k, rule).items;
        },
        py::arg("truth"), py::arg("protected_group"), py::arg("p"), py::arg("k"),
        py::arg("significance") = py::none());

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("ranking", &Dataset::ranking)
      .def_readonly("group_names", &Dataset::group_names)
      .def_readonly("group_sizes", &Dataset::group_sizes)
      .def_readonly("p_star", &Dataset::p_star);
  m.def("load_dataset",
        [](const std::filesystem::path& csv, const std::filesystem::path& schema,
           bool reverse_scores) {
          LoadOptions options;
          options.reverse_scores = reverse_scores;
          return LoadDataset(csv, LoadSchema(schema), options);
        },
        py::arg("csv"), py::arg("schema"), py::arg("reverse_scores") = false);
  m.def("synthetic_dataset", &MakeSyntheticDataset, py::arg("n"),
        py::arg("proportions"), py::arg("seed") = 0);

  m.def("sweep",
        [](const Dataset& dataset, std::vector<std::string> algorithms,
           const std::string& constraint_template,
           std::vector<Rational> delta_grid, std::int64_t k,
           std::vector<std::int64_t> eval_points, const Rational& epsilon,
           const std::string& mode) {
          ExperimentConfig config;
          config.algorithms.clear();
          for (const std::string& a : algorithms) {
            config.algorithms.push_back(ParseAlgorithm(a));
          }
          config.constraint_template = ParseTemplate(constraint_template);
          config.delta_grid = std::move(delta_grid);
          config.k = k;
          config.eval_points = std::move(eval_points);
          config.epsilon = epsilon;
          if (mode == "blocks") {
            config.alg_mode = FairnessMode::kBlocks;
          } else if (mode != "windows") {
            throw Error(ErrorCode::kInvalidSpec, "mode must be windows or blocks");
          }
          const SweepResult result = RunSweep(dataset, config);
          py::list rows;
          for (const SweepRow& row : result.rows) rows.append(RowDict(row));
          return rows;
        },
        py::arg("dataset"),
        py::arg("algorithms") = std::vector<std::string>{"alg", "celis_dp", "fair"},
        py::arg("template") = "lower", py::arg("delta_grid") = DefaultDeltaGrid(),
        py::arg("k") = 100,
        py::arg("eval_points") = std::vector<std::int64_t>{20, 40, 100},
        py::arg("epsilon") = Rational(2, 5), py::arg("mode") = "windows");
}
