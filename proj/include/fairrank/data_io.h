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

#ifndef FAIRRANK_DATA_IO_H_
#define FAIRRANK_DATA_IO_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "fairrank/model.h"
#include "fairrank/rational.h"

namespace fairrank {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of `name` in the header. Throws Error(kMissingColumn).
  std::size_t ColumnIndex(std::string_view name) const;
};

// RFC 4180 style: a header row is required, fields may be double-quoted with
// "" as an escaped quote, CRLF is accepted. Throws Error(kParseError) on
// ragged rows or an unterminated quote.
CsvTable ReadCsv(std::istream& in, char delimiter = ',');
CsvTable ReadCsvFile(const std::filesystem::path& path, char delimiter = ',');

enum class CompareOp { kLess, kLessEqual, kEqual, kGreater, kGreaterEqual, kIn };

// column op value. Comparisons are numeric when both sides parse as numbers,
// textual otherwise; only = and in are allowed on text.
struct Predicate {
  std::string column;
  CompareOp op = CompareOp::kEqual;
  std::vector<std::string> values;  // one value unless op is kIn
};

// A row belongs to the first rule whose predicates all hold. An empty
// predicate list matches every row.
struct GroupRule {
  std::string name;
  std::vector<Predicate> where;
};

enum class ScoreDirection { kDescending, kAscending };

struct DatasetSchema {
  std::string id_column;
  std::string score_column;
  ScoreDirection direction = ScoreDirection::kDescending;
  std::vector<GroupRule> groups;
  char delimiter = ',';
};

// Schema document grammar (JSON):
//   {
//     "id_column": "id",
//     "score_column": "score",
//     "score_direction": "descending" | "ascending",   optional
//     "delimiter": ",",                                 optional
//     "groups": [
//       {"name": "age<25", "where": [["age", "<", 25]]},
//       {"name": "rest", "where": []}
//     ]
//   }
// Operators: "<", "<=", "=", ">", ">=", "in" (value is a list). Throws
// Error(kParseError).
DatasetSchema ParseSchema(std::string_view text);
DatasetSchema LoadSchema(const std::filesystem::path& path);

struct LoadOptions {
  // Rank by the opposite of the schema direction.
  bool reverse_scores = false;
  // Min-max scale the merit into [0, 1] for the nDCG gain. Item::score keeps
  // the signed merit either way.
  bool normalize_gain = true;
};

struct Dataset {
  TrueRanking ranking;
  std::vector<std::string> group_names;
  std::vector<std::int64_t> group_sizes;
  std::vector<Rational> p_star;  // |P_l| / N, sums to exactly 1
};

// Throws Error(kMissingColumn), Error(kNonNumericScore), Error(kUnmatchedRow).
Dataset BuildDataset(const CsvTable& table, const DatasetSchema& schema,
                     const LoadOptions& options = {});
Dataset LoadDataset(const std::filesystem::path& path,
                    const DatasetSchema& schema,
                    const LoadOptions& options = {});

}  // namespace fairrank

#endif  // FAIRRANK_DATA_IO_H_
