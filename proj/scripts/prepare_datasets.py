#!/usr/bin/env python3
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
"""Builds data/german_credit.csv and data/compas.csv from the raw sources.

The raw files are the UCI Statlog German Credit data (german.data) and the
ProPublica compas-scores-two-years.csv. Both ship inside the `responsibly`
wheel, which is the default source:

    pip download responsibly==0.1.2 --no-deps -d /tmp/wheels
    python3 scripts/prepare_datasets.py --wheel /tmp/wheels/responsibly-0.1.2-py3-none-any.whl

German Credit has no published credit score, so the merit score is the mean
of min-max normalised credit amount and duration.

COMPAS rows are filtered the same way as the ProPublica analysis (6172 rows).
The ranking score is decile_score; the schemas rank it ascending so the
lowest assessed risk comes first.
"""

import argparse
import csv
import io
import pathlib
import zipfile

GERMAN_COLUMNS = [
    "status", "duration", "credit_history", "purpose", "credit_amount",
    "savings", "present_employment", "installment_rate", "status_sex",
    "other_debtors", "present_residence_since", "property", "age",
    "installment_plans", "housing", "number_of_existing_credits", "job",
    "number_of_people_liable_for", "telephone", "foreign_worker", "credit",
]
FEMALE_STATUS = {"A92", "A95"}


def read_sources(args):
    if args.wheel:
        with zipfile.ZipFile(args.wheel) as wheel:
            german = wheel.read("responsibly/dataset/german/german.data")
            compas = wheel.read(
                "responsibly/dataset/compas/compas-scores-two-years.csv")
        return german.decode(), compas.decode()
    return (pathlib.Path(args.german).read_text(),
            pathlib.Path(args.compas).read_text())


def write_german(text, out):
    rows = [dict(zip(GERMAN_COLUMNS, line.split()))
            for line in text.splitlines() if line.strip()]
    amount = [float(r["credit_amount"]) for r in rows]
    duration = [float(r["duration"]) for r in rows]

    def normalise(values):
        lo, hi = min(values), max(values)
        return [(v - lo) / (hi - lo) for v in values]

    score = [0.5 * a + 0.5 * d
             for a, d in zip(normalise(amount), normalise(duration))]
    with open(out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "duration_months", "credit_amount", "age", "sex",
                    "credit", "score"])
        for i, (r, s) in enumerate(zip(rows, score)):
            sex = "female" if r["status_sex"] in FEMALE_STATUS else "male"
            w.writerow([f"g{i + 1:04d}", r["duration"], r["credit_amount"],
                        r["age"], sex, r["credit"], f"{s:.6f}"])
    return len(rows)


def write_compas(text, out):
    reader = csv.DictReader(io.StringIO(text))
    kept = []
    for r in reader:
        if r["days_b_screening_arrest"] == "":
            continue
        days = float(r["days_b_screening_arrest"])
        if not -30 <= days <= 30:
            continue
        if r["is_recid"] == "-1" or r["c_charge_degree"] == "O":
            continue
        if r["score_text"] == "N/A":
            continue
        kept.append(r)
    with open(out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "sex", "race", "age", "decile_score",
                    "v_decile_score", "two_year_recid"])
        for r in kept:
            w.writerow([f"c{int(r['id']):05d}", r["sex"].lower(),
                        r["race"], r["age"], r["decile_score"],
                        r["v_decile_score"], r["two_year_recid"]])
    return len(kept)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--wheel", help="path to the responsibly wheel")
    parser.add_argument("--german", help="path to german.data")
    parser.add_argument("--compas", help="path to compas-scores-two-years.csv")
    parser.add_argument("--out-dir", default=str(
        pathlib.Path(__file__).resolve().parent.parent / "data"))
    args = parser.parse_args()
    if not args.wheel and not (args.german and args.compas):
        parser.error("pass --wheel or both --german and --compas")
    german, compas = read_sources(args)
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    print("german_credit.csv:", write_german(german, out / "german_credit.csv"))
    print("compas.csv:", write_compas(compas, out / "compas.csv"))


if __name__ == "__main__":
    main()
