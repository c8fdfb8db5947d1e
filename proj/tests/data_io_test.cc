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

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "fairrank/error.h"
#include "test_support.h"

namespace fairrank {
namespace {

using ::fairrank::testing::DataDir;

constexpr char kSchema[] = R"({
  "id_column": "id",
  "score_column": "score",
  "groups": [
    {"name": "young", "where": [["age", "<", 25]]},
    {"name": "rest", "where": []}
  ]
})";

CsvTable Parse(const std::string& text, char delimiter = ',') {
  std::istringstream in(text);
  return ReadCsv(in, delimiter);
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kInternalInvariantViolation;
}

TEST(CsvTest, QuotesDelimitersAndCrlf) {
  const CsvTable t = Parse("a,b,c\r\n1,\"x,y\",\"say \"\"hi\"\"\"\r\n2,\"multi\nline\",z\n");
  ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "x,y");
  EXPECT_EQ(t.rows[0][2], "say \"hi\"");
  EXPECT_EQ(t.rows[1][1], "multi\nline");
  EXPECT_EQ(t.ColumnIndex("c"), 2u);
}

TEST(CsvTest, CustomDelimiter) {
  const CsvTable t = Parse("a;b\n1;2\n", ';');
  EXPECT_EQ(t.rows[0][1], "2");
}

TEST(CsvTest, Errors) {
  EXPECT_EQ(CodeOf([] { Parse("a,b\n1\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { Parse("a,b\n\"1,2\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { Parse(""); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { Parse("a\n1\n").ColumnIndex("b"); }), ErrorCode::kMissingColumn);
  EXPECT_EQ(CodeOf([] { ReadCsvFile("/nonexistent/file.csv"); }), ErrorCode::kIoError);
}

TEST(SchemaTest, ParsesRulesAndDefaults) {
  const DatasetSchema s = ParseSchema(kSchema);
  EXPECT_EQ(s.id_column, "id");
  EXPECT_EQ(s.direction, ScoreDirection::kDescending);
  EXPECT_EQ(s.delimiter, ',');
  ASSERT_EQ(s.groups.size(), 2u);
  ASSERT_EQ(s.groups[0].where.size(), 1u);
  EXPECT_EQ(s.groups[0].where[0].op, CompareOp::kLess);
  EXPECT_EQ(s.groups[0].where[0].values, (std::vector<std::string>{"25"}));
  EXPECT_TRUE(s.groups[1].where.empty());
}

TEST(SchemaTest, RejectsMalformed) {
  EXPECT_EQ(CodeOf([] { ParseSchema("{"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseSchema(R"({"score_column":"s","groups":[]})"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ParseSchema(R"({"id_column":"i","score_column":"s",
                "groups":[{"name":"g","where":[["a","~",1]]}]})");
            }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ParseSchema(R"({"id_column":"i","score_column":"s",
                "score_direction":"up","groups":[{"name":"g"}]})");
            }),
            ErrorCode::kParseError);
}

TEST(BuildDatasetTest, GroupsScoresAndProportions) {
  const CsvTable t = Parse("id,age,score\na,30,0.5\nb,20,0.9\nc,24,0.5\nd,60,0.1\n");
  const Dataset d = BuildDataset(t, ParseSchema(kSchema));
  ASSERT_EQ(d.ranking.size(), 4u);
  EXPECT_EQ(d.ranking.AtRank(1).id, "b");
  EXPECT_EQ(d.ranking.AtRank(2).id, "a");  // tie with c keeps file order
  EXPECT_EQ(d.ranking.AtRank(3).id, "c");
  EXPECT_EQ(d.ranking.AtRank(1).group, 0u);
  EXPECT_EQ(d.group_sizes, (std::vector<std::int64_t>{2, 2}));
  EXPECT_EQ(d.p_star, (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(d.group_names, (std::vector<std::string>{"young", "rest"}));
  EXPECT_DOUBLE_EQ(d.ranking.AtRank(1).relevance, 1.0);
  EXPECT_DOUBLE_EQ(d.ranking.AtRank(4).relevance, 0.0);
  EXPECT_DOUBLE_EQ(d.ranking.AtRank(1).score, 0.9);
}

TEST(BuildDatasetTest, RawGainKeepsScores) {
  const CsvTable t = Parse("id,age,score\na,30,3\nb,20,7\n");
  LoadOptions options;
  options.normalize_gain = false;
  const Dataset d = BuildDataset(t, ParseSchema(kSchema), options);
  EXPECT_DOUBLE_EQ(d.ranking.AtRank(1).relevance, 7.0);
}

TEST(BuildDatasetTest, AscendingEqualsDescendingOnNegatedScores) {
  const CsvTable up = Parse("id,age,score\na,30,3\nb,20,-1\nc,24,3\nd,60,2\n");
  const CsvTable down = Parse("id,age,score\na,30,-3\nb,20,1\nc,24,-3\nd,60,-2\n");
  DatasetSchema ascending = ParseSchema(kSchema);
  ascending.direction = ScoreDirection::kAscending;
  const Dataset x = BuildDataset(up, ascending);
  const Dataset y = BuildDataset(down, ParseSchema(kSchema));
  for (std::size_t r = 1; r <= 4; ++r) {
    EXPECT_EQ(x.ranking.AtRank(r).id, y.ranking.AtRank(r).id);
    EXPECT_EQ(x.ranking.AtRank(r).score, y.ranking.AtRank(r).score);
  }
  LoadOptions reverse;
  reverse.reverse_scores = true;
  const Dataset z = BuildDataset(down, ParseSchema(kSchema), reverse);
  EXPECT_EQ(z.ranking.AtRank(1).id, "a");
  EXPECT_EQ(z.ranking.AtRank(4).id, "b");
}

TEST(BuildDatasetTest, PredicatesOnText) {
  const DatasetSchema s = ParseSchema(R"({
    "id_column": "id", "score_column": "score",
    "groups": [
      {"name": "aa", "where": [["race", "in", ["African-American", "X"]]]},
      {"name": "f", "where": [["sex", "=", "female"]]},
      {"name": "other", "where": []}
    ]})");
  const CsvTable t = Parse(
      "id,race,sex,score\n1,African-American,male,1\n2,Other,female,2\n3,X,female,3\n4,Other,male,4\n");
  const Dataset d = BuildDataset(t, s);
  EXPECT_EQ(d.group_sizes, (std::vector<std::int64_t>{2, 1, 1}));
  const DatasetSchema bad = ParseSchema(R"({
    "id_column": "id", "score_column": "score",
    "groups": [{"name": "g", "where": [["race", "<", 3]]}, {"name": "h", "where": []}]})");
  EXPECT_EQ(CodeOf([&] { BuildDataset(t, bad); }), ErrorCode::kParseError);
}

TEST(BuildDatasetTest, Errors) {
  const DatasetSchema s = ParseSchema(kSchema);
  EXPECT_EQ(CodeOf([&] { BuildDataset(Parse("id,score\na,1\n"), s); }),
            ErrorCode::kMissingColumn);
  EXPECT_EQ(CodeOf([&] { BuildDataset(Parse("id,age,score\na,3,high\n"), s); }),
            ErrorCode::kNonNumericScore);
  DatasetSchema no_catch_all = s;
  no_catch_all.groups.pop_back();
  EXPECT_EQ(CodeOf([&] { BuildDataset(Parse("id,age,score\na,30,1\n"), no_catch_all); }),
            ErrorCode::kUnmatchedRow);
}

Dataset Load(const char* csv, const char* schema) {
  return LoadDataset(DataDir() / csv, LoadSchema(DataDir() / "schemas" / schema));
}

Rational Sum(const std::vector<Rational>& v) {
  return std::accumulate(v.begin(), v.end(), Rational(0));
}

TEST(BundledDataTest, GermanAgeBelow25) {
  const Dataset d = Load("german_credit.csv", "german_age25.json");
  EXPECT_EQ(d.ranking.size(), 1000u);
  EXPECT_EQ(d.p_star[0], Rational(149, 1000));
  EXPECT_NEAR(ToDouble(d.p_star[0]), 0.15, 0.005);
  EXPECT_EQ(Sum(d.p_star), 1);
}

TEST(BundledDataTest, GermanSixGroups) {
  const Dataset d = Load("german_credit.csv", "german_age_sex6.json");
  ASSERT_EQ(d.p_star.size(), 6u);
  EXPECT_EQ(d.group_sizes, (std::vector<std::int64_t>{324, 88, 301, 138, 65, 84}));
  EXPECT_EQ(Sum(d.p_star), 1);
}

TEST(BundledDataTest, GermanThreeAgeGroups) {
  const Dataset d = Load("german_credit.csv", "german_age3.json");
  EXPECT_EQ(Sum(d.p_star), 1);
  EXPECT_EQ(d.group_sizes[0], 149);
}

TEST(BundledDataTest, CompasFemale) {
  const Dataset d = Load("compas.csv", "compas_female.json");
  EXPECT_EQ(d.ranking.size(), 6172u);
  EXPECT_NEAR(ToDouble(d.p_star[0]), 0.19, 0.005);
  EXPECT_EQ(Sum(d.p_star), 1);
  // Ascending decile: the first item has the lowest decile.
  EXPECT_DOUBLE_EQ(d.ranking.AtRank(1).score, -1.0);
}

TEST(BundledDataTest, ReloadIsDeterministic) {
  const Dataset a = Load("compas.csv", "compas_african_american.json");
  const Dataset b = Load("compas.csv", "compas_african_american.json");
  ASSERT_EQ(a.ranking.size(), b.ranking.size());
  for (std::size_t r = 1; r <= a.ranking.size(); ++r) {
    ASSERT_EQ(a.ranking.AtRank(r).id, b.ranking.AtRank(r).id);
  }
}

}  // namespace
}  // namespace fairrank
