// Copyright 2026 The divminer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "divminer/prepare.hpp"

#include <filesystem>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "divminer/error.hpp"

namespace divminer {
namespace {

namespace fs = std::filesystem;

std::string source(const char* name) { return (fs::path(DIVMINER_DATA_DIR) / name).string(); }

RawTable table_from(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

TEST(PrepareCompas, FilterAndBuckets) {
  const auto raw = table_from(
      "age_cat,race,sex,priors_count,c_charge_degree,c_jail_in,c_jail_out,"
      "days_b_screening_arrest,is_recid,score_text,decile_score,two_year_recid\n"
      // kept: 3-day stay, 5 priors
      "Less than 25,African-American,Male,5,F,2013-01-01 10:00:00,2013-01-04 11:00:00,0,1,High,9,1\n"
      // kept: 30-day stay, no priors
      "Greater than 45,Caucasian,Female,0,M,2013-01-01 10:00:00,2013-01-31 10:00:00,-1,0,Low,2,0\n"
      // dropped: screening too far from arrest
      "25 - 45,Caucasian,Male,1,F,2013-01-01 10:00:00,2013-01-02 10:00:00,45,0,Low,2,0\n"
      // dropped: ordinary traffic offense
      "25 - 45,Caucasian,Male,1,O,2013-01-01 10:00:00,2013-01-02 10:00:00,0,0,Low,2,0\n"
      // kept: long stay, 2 priors, medium score
      "25 - 45,Hispanic,Male,2,F,2013-01-01 10:00:00,2013-06-01 10:00:00,1,0,Medium,6,1\n");
  const auto prepared = prepare_compas(raw);
  ASSERT_EQ(prepared.table.num_rows(), 3u);
  EXPECT_EQ(prepared.table.column_names,
            (std::vector<std::string>{"age", "charge", "#prior", "race", "sex", "stay",
                                      "two_year_recid", "predicted"}));
  EXPECT_EQ(prepared.table.rows[0],
            (std::vector<Cell>{"<25", "F", ">3", "Afr-Am", "Male", "<week", "1", "1"}));
  EXPECT_EQ(prepared.table.rows[1],
            (std::vector<Cell>{">45", "M", "0", "Cauc", "Female", "1w-3M", "0", "0"}));
  EXPECT_EQ(prepared.table.rows[2],
            (std::vector<Cell>{"25-45", "F", "[1,3]", "Hispanic", "Male", ">3Months", "1", "0"}));
  // A lower cut moves the medium score to the positive class.
  PrepareOptions low;
  low.high_risk_decile = 5;
  EXPECT_EQ(*prepare_compas(raw, low).table.rows[2][7], "1");
  EXPECT_EQ(prepared.spec.columns.at("predicted").kind, ColumnStrategy::Kind::kIgnore);
}

TEST(PrepareLawSchool, OneHotSchema) {
  const auto raw = table_from(
      "LSAT,UGPA,ZFYA,Race_Black,Race_White,Sex_1,Sex_2\n"
      "30.0,2.8,-1.2,1,0,0,1\n"
      "44.0,3.9,0.9,0,1,1,0\n");
  const auto prepared = prepare_lawschool(raw);
  ASSERT_EQ(prepared.table.num_rows(), 2u);
  EXPECT_EQ(prepared.table.rows[0],
            (std::vector<Cell>{"30.0", "2.8", "Black", "Male", "-1.2"}));
  EXPECT_EQ(prepared.table.rows[1],
            (std::vector<Cell>{"44.0", "3.9", "White", "Female", "0.9"}));
  EXPECT_EQ(prepared.spec.columns.at("LSAT").edges, (std::vector<double>{33.0, 41.0}));
  EXPECT_EQ(prepared.spec.columns.at("UGPA").edges, (std::vector<double>{3.0, 3.5}));
}

TEST(PrepareLawSchool, OriginalSchema) {
  const auto raw = table_from("race,sex,LSAT,UGPA,ZFYA\nWhite,1,40,3.1,0.2\nBlack,2,31,2.9,-1\n");
  const auto prepared = prepare_lawschool(raw);
  EXPECT_EQ(*prepared.table.rows[0][3], "Female");
  EXPECT_EQ(*prepared.table.rows[1][2], "Black");
}

TEST(Prepare, SchemaDriftListsMissingColumns) {
  try {
    prepare_lawschool(table_from("LSAT,UGPA\n1,2\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("ZFYA"), std::string::npos);
  }
}

TEST(Prepare, MissingSourceFile) {
  try {
    prepare_dataset("compas", "/nonexistent/compas.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  EXPECT_THROW(prepare_dataset("iris", "/nonexistent"), Error);
}

TEST(PrepareRealData, LawSchoolHas21791Students) {
  const auto path = source("law.csv");
  if (!fs::exists(path)) GTEST_SKIP() << "run scripts/fetch_datasets.py for " << path;
  const auto prepared = prepare_dataset("lawschool", path);
  EXPECT_EQ(prepared.table.num_rows(), 21791u);
}

TEST(PrepareRealData, CompasColumnsAndDomains) {
  const auto path = source("compas-scores-two-years.csv");
  if (!fs::exists(path)) GTEST_SKIP() << "run scripts/fetch_datasets.py for " << path;
  const auto prepared = prepare_dataset("compas", path);
  EXPECT_EQ(prepared.table.num_rows(), 6172u);
  std::map<std::string, std::set<std::string>> domains;
  for (const auto& row : prepared.table.rows) {
    for (size_t c = 0; c < row.size(); ++c) domains[prepared.table.column_names[c]].insert(*row[c]);
  }
  EXPECT_EQ(domains["age"], (std::set<std::string>{"<25", "25-45", ">45"}));
  EXPECT_EQ(domains["#prior"], (std::set<std::string>{"0", "[1,3]", ">3"}));
  EXPECT_EQ(domains["charge"], (std::set<std::string>{"F", "M"}));
  EXPECT_EQ(domains["stay"], (std::set<std::string>{"<week", "1w-3M", ">3Months"}));
  EXPECT_TRUE(domains["race"].contains("Afr-Am"));
  EXPECT_TRUE(domains["race"].contains("Cauc"));
}

}  // namespace
}  // namespace divminer
