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

#include "fairrank/data_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include "fairrank/error.h"
#include "json.hpp"

namespace fairrank {

std::size_t CsvTable::ColumnIndex(std::string_view name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw Error(ErrorCode::kMissingColumn,
                "column '" + std::string(name) + "' not in header");
  }
  return static_cast<std::size_t>(it - header.begin());
}

namespace {

// Splits one logical record, pulling further physical lines while a quoted
// field is open. Returns false at end of input.
bool ReadRecord(std::istream& in, char delimiter, std::size_t& line_no,
                std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  const std::size_t start_line = line_no;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == line.size()) {
      if (!quoted) break;
      if (!std::getline(in, line)) {
        throw Error(ErrorCode::kParseError,
                    "unterminated quote starting on line " +
                        std::to_string(start_line));
      }
      ++line_no;
      field.push_back('\n');
      i = static_cast<std::size_t>(-1);
      continue;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // CRLF
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::optional<double> ParseNumber(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

CompareOp ParseOp(const std::string& op) {
  if (op == "<") return CompareOp::kLess;
  if (op == "<=") return CompareOp::kLessEqual;
  if (op == "=" || op == "==") return CompareOp::kEqual;
  if (op == ">") return CompareOp::kGreater;
  if (op == ">=") return CompareOp::kGreaterEqual;
  if (op == "in") return CompareOp::kIn;
  throw Error(ErrorCode::kParseError, "unknown operator '" + op + "'");
}

std::string ScalarText(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  if (value.is_number()) {
    std::ostringstream out;
    out.precision(17);
    out << value.get<double>();
    return out.str();
  }
  throw Error(ErrorCode::kParseError,
              "predicate value must be a string or number, got " + value.dump());
}

bool Holds(const Predicate& p, const std::string& cell) {
  if (p.op == CompareOp::kIn) {
    const std::optional<double> x = ParseNumber(cell);
    return std::any_of(p.values.begin(), p.values.end(), [&](const auto& v) {
      const std::optional<double> y = ParseNumber(v);
      return (x && y) ? *x == *y : cell == v;
    });
  }
  const std::optional<double> x = ParseNumber(cell);
  const std::optional<double> y = ParseNumber(p.values.front());
  if (!x || !y) {
    if (p.op == CompareOp::kEqual) return cell == p.values.front();
    throw Error(ErrorCode::kParseError,
                "column '" + p.column + "': cannot order '" + cell +
                    "' against '" + p.values.front() + "'");
  }
  switch (p.op) {
    case CompareOp::kLess: return *x < *y;
    case CompareOp::kLessEqual: return *x <= *y;
    case CompareOp::kEqual: return *x == *y;
    case CompareOp::kGreater: return *x > *y;
    case CompareOp::kGreaterEqual: return *x >= *y;
    case CompareOp::kIn: break;
  }
  return false;
}

}  // namespace

CsvTable ReadCsv(std::istream& in, char delimiter) {
  CsvTable table;
  std::size_t line_no = 0;
  if (!ReadRecord(in, delimiter, line_no, table.header)) {
    throw Error(ErrorCode::kParseError, "missing header row");
  }
  if (!table.header.empty() && table.header[0].starts_with("\xEF\xBB\xBF")) {
    table.header[0].erase(0, 3);
  }
  std::vector<std::string> fields;
  while (ReadRecord(in, delimiter, line_no, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != table.header.size()) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, header has " +
                      std::to_string(table.header.size()));
    }
    table.rows.push_back(fields);
  }
  return table;
}

CsvTable ReadCsvFile(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  return ReadCsv(in, delimiter);
}

DatasetSchema ParseSchema(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("schema: ") + e.what());
  }
  try {
    DatasetSchema schema;
    schema.id_column = doc.at("id_column").get<std::string>();
    schema.score_column = doc.at("score_column").get<std::string>();
    const std::string direction = doc.value("score_direction", "descending");
    if (direction == "descending") {
      schema.direction = ScoreDirection::kDescending;
    } else if (direction == "ascending") {
      schema.direction = ScoreDirection::kAscending;
    } else {
      throw Error(ErrorCode::kParseError,
                  "score_direction must be ascending or descending");
    }
    const std::string delimiter = doc.value("delimiter", ",");
    if (delimiter.size() != 1) {
      throw Error(ErrorCode::kParseError, "delimiter must be one character");
    }
    schema.delimiter = delimiter[0];
    for (const auto& group : doc.at("groups")) {
      GroupRule rule;
      rule.name = group.at("name").get<std::string>();
      for (const auto& clause : group.value("where", nlohmann::json::array())) {
        if (!clause.is_array() || clause.size() != 3) {
          throw Error(ErrorCode::kParseError,
                      "group '" + rule.name +
                          "': predicate must be [column, op, value]");
        }
        Predicate p;
        p.column = clause[0].get<std::string>();
        p.op = ParseOp(clause[1].get<std::string>());
        if (p.op == CompareOp::kIn) {
          if (!clause[2].is_array()) {
            throw Error(ErrorCode::kParseError, "'in' needs a list value");
          }
          for (const auto& v : clause[2]) p.values.push_back(ScalarText(v));
        } else {
          p.values.push_back(ScalarText(clause[2]));
        }
        rule.where.push_back(std::move(p));
      }
      schema.groups.push_back(std::move(rule));
    }
    if (schema.groups.empty()) {
      throw Error(ErrorCode::kParseError, "schema has no groups");
    }
    return schema;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("schema: ") + e.what());
  }
}

DatasetSchema LoadSchema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return ParseSchema(text.str());
}

Dataset BuildDataset(const CsvTable& table, const DatasetSchema& schema,
                     const LoadOptions& options) {
  const std::size_t id_col = table.ColumnIndex(schema.id_column);
  const std::size_t score_col = table.ColumnIndex(schema.score_column);
  std::vector<std::vector<std::size_t>> rule_cols(schema.groups.size());
  for (std::size_t g = 0; g < schema.groups.size(); ++g) {
    for (const Predicate& p : schema.groups[g].where) {
      rule_cols[g].push_back(table.ColumnIndex(p.column));
    }
  }
  bool ascending = schema.direction == ScoreDirection::kAscending;
  if (options.reverse_scores) ascending = !ascending;

  std::vector<Item> items;
  items.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::optional<double> raw = ParseNumber(row[score_col]);
    if (!raw) {
      throw Error(ErrorCode::kNonNumericScore,
                  "row " + std::to_string(r + 1) + ": score '" +
                      row[score_col] + "' is not numeric");
    }
    std::optional<GroupId> group;
    for (std::size_t g = 0; g < schema.groups.size() && !group; ++g) {
      bool match = true;
      for (std::size_t i = 0; i < rule_cols[g].size() && match; ++i) {
        match = Holds(schema.groups[g].where[i], row[rule_cols[g][i]]);
      }
      if (match) group = g;
    }
    if (!group) {
      throw Error(ErrorCode::kUnmatchedRow,
                  "row " + std::to_string(r + 1) + " (id '" + row[id_col] +
                      "') matches no group rule");
    }
    // 0.0 - x keeps -0.0 out of the merit.
    const double merit = ascending ? 0.0 - *raw : *raw;
    items.push_back(Item{row[id_col], merit, *group, merit});
  }

  if (!items.empty()) {
    auto [lo, hi] = std::minmax_element(
        items.begin(), items.end(),
        [](const Item& a, const Item& b) { return a.score < b.score; });
    const double low = lo->score;
    const double span = hi->score - low;
    for (Item& item : items) {
      if (options.normalize_gain) {
        item.relevance = span > 0 ? (item.score - low) / span : 0.0;
      }
    }
  }

  Dataset dataset;
  dataset.ranking = TrueRanking::FromUnsorted(std::move(items), schema.groups.size());
  for (const GroupRule& rule : schema.groups) dataset.group_names.push_back(rule.name);
  dataset.group_sizes = dataset.ranking.GroupSizes();
  const auto total = static_cast<std::int64_t>(dataset.ranking.size());
  for (std::int64_t size : dataset.group_sizes) {
    dataset.p_star.push_back(total > 0 ? Rational(size, total) : Rational(0));
  }
  return dataset;
}

Dataset LoadDataset(const std::filesystem::path& path,
                    const DatasetSchema& schema, const LoadOptions& options) {
  return BuildDataset(ReadCsvFile(path, schema.delimiter), schema, options);
}

}  // namespace fairrank
