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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "divminer/error.hpp"
#include "divminer/report.hpp"
#include "logging.hpp"

namespace divminer {
namespace {

void require_columns(const RawTable& table, std::string_view dataset,
                     std::initializer_list<std::string_view> columns) {
  std::string missing;
  for (auto column : columns) {
    if (!table.find_column(column)) {
      missing += (missing.empty() ? "" : ", ") + std::string(column);
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kParse,
                std::string(dataset) + " source is missing columns: " + missing);
  }
}

const std::string& text_at(const RawTable& table, size_t row, size_t col) {
  static const std::string kEmpty;
  const Cell& cell = table.rows[row][col];
  return cell ? *cell : kEmpty;
}

std::optional<double> number_at(const RawTable& table, size_t row, size_t col) {
  const Cell& cell = table.rows[row][col];
  return cell ? parse_number(*cell) : std::nullopt;
}

// "YYYY-MM-DD HH:MM:SS" (time optional) as seconds since the epoch.
std::optional<int64_t> parse_timestamp(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  const int fields = std::sscanf(text.c_str(), "%d-%d-%d %d:%d:%d", &y, &mo, &d, &h, &mi, &s);
  if (fields < 3) return std::nullopt;
  using namespace std::chrono;
  const year_month_day date{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  const auto days_since = sys_days{date}.time_since_epoch();
  return duration_cast<seconds>(days_since).count() + h * 3600 + mi * 60 + s;
}

std::string stay_bucket(int64_t days) {
  if (days <= 7) return "<week";
  if (days <= 93) return "1w-3M";
  return ">3Months";
}

std::string prior_bucket(double priors) {
  if (priors <= 0) return "0";
  if (priors <= 3) return "[1,3]";
  return ">3";
}

}  // namespace

PreparedDataset prepare_compas(const RawTable& source, const PrepareOptions& options) {
  require_columns(source, "COMPAS",
                  {"age_cat", "race", "sex", "priors_count", "c_charge_degree", "c_jail_in",
                   "c_jail_out", "days_b_screening_arrest", "is_recid", "score_text",
                   "decile_score", "two_year_recid"});
  const size_t age = source.column_index("age_cat");
  const size_t race = source.column_index("race");
  const size_t sex = source.column_index("sex");
  const size_t priors = source.column_index("priors_count");
  const size_t charge = source.column_index("c_charge_degree");
  const size_t jail_in = source.column_index("c_jail_in");
  const size_t jail_out = source.column_index("c_jail_out");
  const size_t screening = source.column_index("days_b_screening_arrest");
  const size_t is_recid = source.column_index("is_recid");
  const size_t score_text = source.column_index("score_text");
  const size_t decile = source.column_index("decile_score");
  const size_t truth = source.column_index("two_year_recid");

  static const std::map<std::string, std::string> kAge = {
      {"Less than 25", "<25"}, {"25 - 45", "25-45"}, {"Greater than 45", ">45"}};
  static const std::map<std::string, std::string> kRace = {
      {"African-American", "Afr-Am"}, {"Caucasian", "Cauc"}, {"Hispanic", "Hispanic"},
      {"Other", "Other"},             {"Asian", "Asian"},    {"Native American", "Native-Am"}};

  PreparedDataset prepared;
  prepared.name = "compas";
  prepared.table.column_names = {"age", "charge", "#prior", "race", "sex", "stay",
                                 "two_year_recid", "predicted"};
  size_t skipped = 0;
  for (size_t r = 0; r < source.num_rows(); ++r) {
    const auto days_b = number_at(source, r, screening);
    const auto recid = number_at(source, r, is_recid);
    if (!days_b || *days_b > 30 || *days_b < -30) continue;
    if (!recid || *recid == -1) continue;
    if (text_at(source, r, charge) == "O") continue;
    if (text_at(source, r, score_text) == "N/A" || text_at(source, r, score_text).empty()) continue;

    const auto in = parse_timestamp(text_at(source, r, jail_in));
    const auto out = parse_timestamp(text_at(source, r, jail_out));
    const auto prior_count = number_at(source, r, priors);
    const auto decile_score = number_at(source, r, decile);
    const auto truth_value = number_at(source, r, truth);
    auto age_it = kAge.find(text_at(source, r, age));
    auto race_it = kRace.find(text_at(source, r, race));
    if (!in || !out || !prior_count || !decile_score || !truth_value || age_it == kAge.end() ||
        race_it == kRace.end()) {
      ++skipped;
      continue;
    }
    const auto seconds = *out - *in;
    const int64_t stay_days = seconds >= 0 ? seconds / 86400 : -((-seconds + 86399) / 86400);
    prepared.table.rows.push_back({
        age_it->second,
        text_at(source, r, charge),
        prior_bucket(*prior_count),
        race_it->second,
        text_at(source, r, sex),
        stay_bucket(stay_days),
        std::string(*truth_value != 0 ? "1" : "0"),
        std::string(*decile_score >= options.high_risk_decile ? "1" : "0"),
    });
  }
  if (skipped > 0) log().warn("COMPAS: skipped {} rows with unparseable fields", skipped);

  for (const char* column : {"age", "charge", "#prior", "race", "sex", "stay"}) {
    prepared.spec.columns.emplace(column, ColumnStrategy::categorical());
  }
  prepared.spec.columns.emplace("two_year_recid", ColumnStrategy::ignore());
  prepared.spec.columns.emplace("predicted", ColumnStrategy::ignore());
  return prepared;
}

PreparedDataset prepare_lawschool(const RawTable& source) {
  const bool one_hot = source.find_column("Sex_1").has_value();
  if (one_hot) {
    require_columns(source, "Law School", {"LSAT", "UGPA", "ZFYA", "Sex_1", "Sex_2"});
  } else {
    require_columns(source, "Law School", {"LSAT", "UGPA", "ZFYA", "race", "sex"});
  }
  const size_t lsat = source.column_index("LSAT");
  const size_t ugpa = source.column_index("UGPA");
  const size_t zfya = source.column_index("ZFYA");

  std::vector<std::pair<std::string, size_t>> race_columns;
  if (one_hot) {
    for (size_t c = 0; c < source.num_columns(); ++c) {
      const std::string& name = source.column_names[c];
      if (name.starts_with("Race_")) race_columns.emplace_back(name.substr(5), c);
    }
    if (race_columns.empty()) {
      throw Error(ErrorCode::kParse, "Law School source is missing columns: Race_*");
    }
  }

  PreparedDataset prepared;
  prepared.name = "lawschool";
  prepared.table.column_names = {"LSAT", "UGPA", "race", "sex", "ZFYA"};
  for (size_t r = 0; r < source.num_rows(); ++r) {
    std::string race;
    std::string sex;
    if (one_hot) {
      for (const auto& [label, c] : race_columns) {
        if (number_at(source, r, c).value_or(0) == 1) race = label;
      }
      if (number_at(source, r, source.column_index("Sex_1")).value_or(0) == 1) {
        sex = "Female";
      } else if (number_at(source, r, source.column_index("Sex_2")).value_or(0) == 1) {
        sex = "Male";
      }
    } else {
      race = text_at(source, r, source.column_index("race"));
      const auto code = number_at(source, r, source.column_index("sex"));
      if (code == 1.0) sex = "Female";
      if (code == 2.0) sex = "Male";
    }
    auto cell = [](const std::string& s) { return s.empty() ? Cell{} : Cell{s}; };
    prepared.table.rows.push_back({source.rows[r][lsat], source.rows[r][ugpa], cell(race),
                                   cell(sex), source.rows[r][zfya]});
  }

  prepared.spec.columns.emplace("LSAT", ColumnStrategy::explicit_edges({33.0, 41.0}));
  prepared.spec.columns.emplace("UGPA", ColumnStrategy::explicit_edges({3.0, 3.5}));
  prepared.spec.columns.emplace("race", ColumnStrategy::categorical());
  prepared.spec.columns.emplace("sex", ColumnStrategy::categorical());
  prepared.spec.columns.emplace("ZFYA", ColumnStrategy::ignore());
  return prepared;
}

PreparedDataset prepare_dataset(std::string_view name, const std::string& source_path,
                                const PrepareOptions& options) {
  if (name != "compas" && name != "lawschool") {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown dataset '" + std::string(name) + "' (expected compas or lawschool)");
  }
  if (!std::filesystem::exists(source_path)) {
    throw Error(ErrorCode::kIo, "source file '" + source_path + "' does not exist");
  }
  const RawTable source = load_csv(source_path);
  return name == "compas" ? prepare_compas(source, options) : prepare_lawschool(source);
}

void write_prepared(const PreparedDataset& prepared, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + out_dir + "': " + ec.message());
  const auto base = std::filesystem::path(out_dir) / prepared.name;
  {
    std::ofstream out(base.string() + ".csv", std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + base.string() + ".csv'");
    write_csv(out, prepared.table);
  }
  write_text_file(base.string() + ".spec.json", prepared.spec.to_json());
}

}  // namespace divminer
