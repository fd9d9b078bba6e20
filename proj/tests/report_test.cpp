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

#include "divminer/report.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "divminer/error.hpp"
#include "test_support.hpp"

namespace divminer {
namespace {

MiningResult sample_result(uint64_t seed = 6) {
  std::mt19937_64 rng(seed);
  const auto s = testing::random_synthetic(rng, 200, 5, 3, 0.1);
  MineOptions options;
  options.threshold = 0.02;
  options.outcome_description = "attribute:y";
  return mine(s.dataset(), OutcomeVector(s.outcome), options);
}

TEST(Format, FixedFourDecimals) {
  EXPECT_EQ(format_fixed4(0.59351), "0.5935");
  EXPECT_EQ(format_fixed4(-1.02574), "-1.0257");
  EXPECT_EQ(format_fixed4(-0.00001), "0.0000");
  EXPECT_EQ(format_fixed4(std::nan("")), "—");
  EXPECT_EQ(format_fixed4(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_fixed4(std::optional<double>{}), "—");
  EXPECT_EQ(format_fixed4(std::optional<double>{2.0}), "2.0000");
}

TEST(Report, CsvHasOneLinePerRecord) {
  const auto result = sample_result();
  std::ostringstream out;
  write_itemsets_csv(result, out);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("itemset,support,count,outcome,divergence,t\n", 0), 0u);
  const auto lines = std::count(text.begin(), text.end(), '\n');
  EXPECT_EQ(static_cast<size_t>(lines), result.records().size() + 1);
  EXPECT_NE(text.find("\n(all),1.0000,"), std::string::npos);
}

TEST(Report, JsonRoundTripPreservesEverything) {
  const auto result = sample_result();
  const auto back = result_from_json(result_to_json(result));
  ASSERT_EQ(back.records().size(), result.records().size());
  EXPECT_EQ(back.metadata().n_rows, result.metadata().n_rows);
  EXPECT_EQ(back.metadata().dataset_hash, result.metadata().dataset_hash);
  EXPECT_EQ(back.metadata().outcome, "attribute:y");
  EXPECT_EQ(back.dictionary().num_items(), result.dictionary().num_items());
  for (size_t i = 0; i < result.records().size(); ++i) {
    const auto& a = result.records()[i];
    const auto& b = back.records()[i];
    EXPECT_EQ(a.itemset, b.itemset);
    EXPECT_EQ(a.match_count, b.match_count);
    EXPECT_EQ(a.outcome_count, b.outcome_count);
    EXPECT_TRUE(testing::close(a.divergence, b.divergence, 0.0));
    EXPECT_TRUE(testing::close(a.outcome_mean, b.outcome_mean, 0.0));
    EXPECT_EQ(a.t_value.has_value(), b.t_value.has_value());
    if (a.t_value) EXPECT_TRUE(testing::close(*a.t_value, *b.t_value, 0.0));
  }
  EXPECT_EQ(result_to_json(back), result_to_json(result));
}

TEST(Report, ReloadedJsonReproducesMarkdown) {
  for (uint64_t seed : {1, 2, 3}) {
    const auto result = sample_result(seed);
    const auto back = result_from_json(result_to_json(result));
    for (auto sign : {std::optional<Sign>{}, std::optional<Sign>{Sign::kAbsolute}}) {
      EXPECT_EQ(render_top_markdown(back, 5, sign), render_top_markdown(result, 5, sign));
    }
  }
}

TEST(Report, JsonKeepsInfinityAndUndefined) {
  auto dictionary = testing::make_dictionary({2});
  std::vector<ItemsetRecord> records(3);
  records[1].itemset = Itemset({0});
  records[1].t_value = std::numeric_limits<double>::infinity();
  records[2].itemset = Itemset({1});
  records[2].divergence = std::nan("");
  records[2].outcome_mean = std::nan("");
  const MiningResult result(dictionary, records, {});
  const auto back = result_from_json(result_to_json(result));
  EXPECT_TRUE(std::isinf(*back.records()[1].t_value));
  EXPECT_FALSE(back.records()[2].t_value);
  EXPECT_TRUE(std::isnan(back.records()[2].divergence));
}

TEST(Report, MalformedJsonIsAParseError) {
  try {
    result_from_json("{\"format_version\": 1}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
  EXPECT_THROW(result_from_json("[1, 2"), Error);
}

TEST(Report, MarkdownTable) {
  const auto result = sample_result();
  const std::string md = render_top_markdown(result, 2, Sign::kNegative);
  EXPECT_NE(md.find("## Lowest divergence"), std::string::npos);
  EXPECT_EQ(md.find("## Highest divergence"), std::string::npos);
  EXPECT_NE(md.find("| Itemset | Sup | Δ | t |"), std::string::npos);
  const auto top = top_k_records(result, 1, Sign::kNegative);
  EXPECT_NE(md.find("| " + itemset_label(result.dictionary(), top[0]->itemset) + " | "),
            std::string::npos);
  const std::string both = render_top_markdown(result, 2, std::nullopt);
  EXPECT_NE(both.find("## Highest divergence"), std::string::npos);
  EXPECT_NE(both.find("## Lowest divergence"), std::string::npos);
}

TEST(Report, AttributionOutputs) {
  auto dictionary = testing::make_dictionary({2, 2});
  ShapleyAttribution attribution;
  attribution.itemset = Itemset({0, 2});
  attribution.contributions = {{0, 0.25}, {2, -0.15}};
  attribution.divergence = 0.1;
  const std::string json = attribution_to_json(*dictionary, attribution);
  EXPECT_NE(json.find("\"residual_check\""), std::string::npos);
  EXPECT_NE(json.find("\"a1=0\""), std::string::npos);
  const std::string svg = render_attribution_svg(*dictionary, attribution);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("a0=0"), std::string::npos);
  EXPECT_NE(svg.find("a1=0"), std::string::npos);
  // Largest magnitude first.
  EXPECT_LT(svg.find(">a0=0<"), svg.find(">a1=0<"));
}

TEST(Report, WriteTextFileFailsCleanly) {
  EXPECT_THROW(write_text_file("/nonexistent-dir/x/y.txt", "x"), Error);
  const auto path = std::filesystem::temp_directory_path() / "divminer_report_test.txt";
  write_text_file(path.string(), "hello");
  EXPECT_EQ(std::filesystem::file_size(path), 5u);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace divminer
