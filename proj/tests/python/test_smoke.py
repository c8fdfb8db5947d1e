# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the Python extension."""

import os
import pathlib
from fractions import Fraction

import pytest

import fairrank

DATA = pathlib.Path(
    os.environ.get("FAIRRANK_DATA", pathlib.Path(__file__).parents[2] / "data"))


def alternating(n):
    items = [fairrank.Item(f"t{i + 1}", float(n - i), 0 if i < n // 2 else 1)
             for i in range(n)]
    return fairrank.TrueRanking(items, 2)


def test_rerank_blocks_is_fair_and_bounded():
    truth = alternating(40)
    spec = fairrank.FairnessSpec([Fraction(1, 2)] * 2, [Fraction(2, 5)] * 2,
                                 k=10, epsilon=Fraction(1), mode="blocks")
    items, params = fairrank.rerank(truth, spec)
    assert len(items) == 40
    assert params["underranking_bound"] == 2
    passed, _ = fairrank.audit_blocks(items, spec, params["guaranteed_blocks"])
    assert passed
    assert fairrank.observed_underranking(items, truth) <= 2


def test_minimum_epsilon_is_exact():
    spec = fairrank.FairnessSpec([1, 1], ["0.15", 0], k=100)
    assert fairrank.minimum_epsilon(spec) == Fraction(57, 850)


def test_metrics_on_identity():
    truth = alternating(10)
    items = truth.items()
    assert fairrank.ndcg_at(items, truth, 10) == pytest.approx(1.0)
    assert fairrank.underranking_at(items, truth, 10) == 1
    assert fairrank.representation(items, 0, 1, 10) == Fraction(1, 2)
    assert fairrank.precision_at(items, truth, 5) == 5


def test_lower_bound_value():
    spec = fairrank.FairnessSpec(["1/2", "1/2"], ["2/5", "2/5"], k=10,
                                 mode="blocks")
    assert fairrank.lower_bound_value(spec) == 2
    truth = fairrank.adversarial_instance(spec, 4)
    assert len(truth) == 8


def test_errors_carry_codes():
    spec = fairrank.FairnessSpec([1, 1], ["0.15", 0], k=100,
                                 epsilon=Fraction(1, 100))
    with pytest.raises(fairrank.FairrankError) as info:
        fairrank.rerank(alternating(200), spec)
    assert info.value.code == "EpsilonBelowMinimum"
    with pytest.raises(TypeError):
        fairrank.FairnessSpec([0.5, 0.5], [0.4, 0.4], k=10)


def test_dataset_and_sweep():
    data = fairrank.load_dataset(DATA / "german_credit.csv",
                                 DATA / "schemas" / "german_age25.json")
    assert len(data.ranking) == 1000
    assert data.p_star[0] == Fraction(149, 1000)
    rows = fairrank.sweep(data, delta_grid=[0, Fraction(1, 20)])
    assert len(rows) == 3 * 2 * 3
    assert all(r["status"] == "ok" for r in rows)
    alg = [r for r in rows if r["algorithm"] == "alg"]
    assert all(r["underranking"] <= r["bound"] for r in alg)


def test_baselines():
    truth = alternating(8)
    k = 4
    lower = [[0, 1, 1, 2], [0, 0, 1, 2]]
    upper = [[1, 2, 3, 4], [1, 2, 3, 4]]
    items, utility = fairrank.celis_dp(truth, k, lower, upper)
    assert len(items) == k and utility > 0
    fair = fairrank.fair_star(truth, 1, Fraction(1, 2), 4)
    assert sum(1 for i in fair if i.group == 1) >= 2
