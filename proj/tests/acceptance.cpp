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

// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Reference data comes from DIVMINER_DATA_DIR (see
// scripts/fetch_datasets.py); the determinism check runs the CLI.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <set>
#include <string>
#include <thread>

#include "divminer/discretize.hpp"
#include "divminer/error.hpp"
#include "divminer/miner.hpp"
#include "divminer/outcome.hpp"
#include "divminer/prepare.hpp"
#include "divminer/report.hpp"
#include "divminer/shapley.hpp"
#include "test_support.hpp"

namespace {

using namespace divminer;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), format, a, b, c, d);
  return buffer;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int number, const std::string& title, const std::function<Outcome()>& check) {
  Outcome outcome;
  try {
    outcome = check();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  if (!outcome.pass) ++failures;
  std::printf("%s criterion %d: %s (%s)\n", outcome.pass ? "PASS" : "FAIL", number, title.c_str(),
              outcome.detail.c_str());
  std::fflush(stdout);
}

std::string data_file(const char* name) {
  const auto path = fs::path(DIVMINER_DATA_DIR) / name;
  if (!fs::exists(path)) {
    throw std::runtime_error(path.string() + " not found; run scripts/fetch_datasets.py");
  }
  return path.string();
}

struct Mined {
  MiningResult result;
  OutcomeVector outcome;
};

Mined mine_prepared(const PreparedDataset& prepared, const std::string& outcome_text,
                    double support, unsigned threads = 1) {
  const auto spec = OutcomeSpec::parse(outcome_text);
  const auto columns = spec.source_columns();
  std::set<std::string> exclude;
  for (const auto& c : columns) {
    exclude.insert(prepared.table.column_names[prepared.table.column_index(c)]);
  }
  const auto dataset = discretize(prepared.table, prepared.spec, exclude);
  auto outcome = build_outcome(prepared.table, spec, dataset.source_rows());
  MineOptions options;
  options.threshold = support;
  options.threads = threads;
  options.outcome_description = outcome_text;
  auto result = mine(dataset, outcome, options);
  return {std::move(result), std::move(outcome)};
}

const ItemsetRecord* find_label(const MiningResult& result, const std::string& label) {
  return result.find(parse_itemset(result.dictionary(), label));
}

double contribution(const MiningResult& result, const ShapleyAttribution& a,
                    const std::string& item) {
  const auto id = result.dictionary().find_label(item);
  for (const auto& [i, v] : a.contributions) {
    if (id && i == *id) return v;
  }
  throw std::runtime_error("item " + item + " not in attribution");
}

// Criteria 1 and 2 share the same 100 random instances.
struct OracleStats {
  size_t datasets = 0;
  size_t records = 0;
  size_t mismatches = 0;
  double worst_real = 0.0;
  size_t shapley_checked = 0;
  size_t permutation_checked = 0;
  double worst_efficiency = 0.0;
  double worst_permutation = 0.0;
  double mine_seconds = 0.0;
  double total_seconds = 0.0;
};

OracleStats run_oracle_suite() {
  OracleStats stats;
  const auto start = Clock::now();
  std::mt19937_64 rng(0xD1CE);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = testing::random_synthetic(rng, 200, 6, 4, 0.1);
    const uint64_t min_count = 1 + rng() % 10;
    const size_t n = s.values.size();
    MineOptions options;
    options.threshold = (static_cast<double>(min_count) - 0.5) / static_cast<double>(n);
    const auto mine_start = Clock::now();
    const auto result = mine(s.dataset(), OutcomeVector(s.outcome), options);
    stats.mine_seconds += seconds_since(mine_start);
    const testing::BruteForce oracle(s, min_count);
    ++stats.datasets;

    if (result.records().size() != oracle.records().size()) ++stats.mismatches;
    for (const auto& record : result.records()) {
      ++stats.records;
      const std::vector<ItemId> ids(record.itemset.items().begin(), record.itemset.items().end());
      const auto it = oracle.records().find(ids);
      if (it == oracle.records().end() || it->second.matches != record.match_count ||
          it->second.count != record.outcome_count ||
          record.support != static_cast<double>(it->second.matches) / static_cast<double>(n)) {
        ++stats.mismatches;
        continue;
      }
      for (auto [got, want] : {std::pair{record.outcome_mean, it->second.mean},
                               std::pair{record.divergence, it->second.divergence}}) {
        if (std::isnan(got) != std::isnan(want)) {
          ++stats.mismatches;
        } else if (!std::isnan(got)) {
          stats.worst_real = std::max(stats.worst_real, std::abs(got - want));
        }
      }

      if (std::isnan(record.divergence)) continue;
      const auto attribution = shapley(record.itemset, result);
      double total = 0.0;
      for (const auto& [item, value] : attribution.contributions) total += value;
      stats.worst_efficiency =
          std::max(stats.worst_efficiency, std::abs(total - record.divergence));
      ++stats.shapley_checked;
      const auto expected = oracle.permutation_shapley(ids);
      if (!std::all_of(expected.begin(), expected.end(), [](double v) { return std::isfinite(v); })) {
        continue;
      }
      for (size_t i = 0; i < ids.size(); ++i) {
        stats.worst_permutation = std::max(
            stats.worst_permutation, std::abs(attribution.contributions[i].second - expected[i]));
      }
      ++stats.permutation_checked;
    }
  }
  stats.total_seconds = seconds_since(start);
  return stats;
}

int run_cli(const std::string& args) {
  const std::string command = std::string(DIVMINER_CLI) + " " + args + " > /dev/null";
  const int raw = std::system(command.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const OracleStats oracle = run_oracle_suite();

  report(1, "miner equals exhaustive enumeration on 100 random datasets", [&] {
    return Outcome{oracle.mismatches == 0 && oracle.worst_real <= 1e-9 &&
                       oracle.total_seconds < 10.0,
                   std::to_string(oracle.datasets) + " datasets, " +
                       std::to_string(oracle.records) + " records, " +
                       std::to_string(oracle.mismatches) + " count mismatches, max real error " +
                       fmt("%.2e, %.2f s", oracle.worst_real, oracle.total_seconds)};
  });

  report(2, "Shapley efficiency and all-orderings oracle", [&] {
    return Outcome{oracle.worst_efficiency <= 1e-9 && oracle.worst_permutation <= 1e-9 &&
                       oracle.shapley_checked > 0,
                   std::to_string(oracle.shapley_checked) + " itemsets, " +
                       std::to_string(oracle.permutation_checked) + " vs orderings; " +
                       fmt("max |sum - div| %.2e, max oracle error %.2e", oracle.worst_efficiency,
                           oracle.worst_permutation)};
  });

  std::optional<PreparedDataset> compas;
  std::optional<Mined> compas_fpr;
  report(3, "COMPAS FPR top itemset and global rates", [&] {
    const auto start = Clock::now();
    compas = prepare_dataset("compas", data_file("compas-scores-two-years.csv"));
    compas_fpr = mine_prepared(*compas, "fpr:two_year_recid:predicted", 0.0175);
    const auto fnr = mine_prepared(*compas, "fnr:two_year_recid:predicted", 0.0175);
    const double elapsed = seconds_since(start);
    const auto& result = compas_fpr->result;
    const auto* target = find_label(result, "age<25, #prior>3, sex=Male");
    bool in_top3 = false;
    for (const auto* r : top_k_records(result, 3, Sign::kPositive)) in_top3 |= r == target;
    const double global_fpr = compas_fpr->outcome.global_mean();
    const double global_fnr = fnr.outcome.global_mean();
    const bool ok = target && in_top3 && std::abs(target->divergence - 0.594) <= 0.05 &&
                    target->t_value && std::abs(*target->t_value - 6.1) <= 1.0 &&
                    std::abs(global_fpr - 0.09) <= 0.02 && std::abs(global_fnr - 0.70) <= 0.02 &&
                    elapsed < 30.0;
    if (!target) return Outcome{false, "itemset not mined"};
    return Outcome{ok, std::string(in_top3 ? "in top 3" : "NOT in top 3") +
                           fmt(", div %.4f, t %.2f, FPR %.4f, FNR %.4f", target->divergence,
                               target->t_value.value_or(NAN), global_fpr, global_fnr) +
                           fmt(", %.2f s", elapsed)};
  });

  std::optional<PreparedDataset> law;
  std::optional<Mined> law_zfya;
  report(4, "Law School ZFYA top positive and negative itemsets", [&] {
    law = prepare_dataset("lawschool", data_file("law.csv"));
    law_zfya = mine_prepared(*law, "attribute:ZFYA", 0.005);
    const auto& result = law_zfya->result;
    const auto* pos = top_k_records(result, 1, Sign::kPositive).at(0);
    const auto* neg = top_k_records(result, 1, Sign::kNegative).at(0);
    const auto& dict = result.dictionary();
    const bool ok =
        itemset_label(dict, pos->itemset) == "LSAT>41.0, UGPA>3.5, race=White, sex=Female" &&
        itemset_label(dict, neg->itemset) == "LSAT≤33.0, race=Black, sex=Male" &&
        std::abs(pos->divergence - 0.4115) <= 0.02 && std::abs(*pos->t_value - 11.1) <= 1.5 &&
        std::abs(neg->divergence + 1.0257) <= 0.02 && std::abs(*neg->t_value - 21.2) <= 2.0;
    return Outcome{ok, "top {" + itemset_label(dict, pos->itemset) + "}" +
                           fmt(" div %.4f t %.2f", pos->divergence, *pos->t_value) + "; bottom {" +
                           itemset_label(dict, neg->itemset) + "}" +
                           fmt(" div %.4f t %.2f", neg->divergence, *neg->t_value)};
  });

  std::optional<Mined> law_rank;
  report(5, "ranking divergence by ZFYA with i^-0.1", [&] {
    if (!law) law = prepare_dataset("lawschool", data_file("law.csv"));
    law_rank = mine_prepared(*law, "rank:ZFYA:desc:power=0.1", 0.005);
    const auto& result = law_rank->result;
    const auto* pos = top_k_records(result, 1, Sign::kPositive).at(0);
    const auto* neg = top_k_records(result, 1, Sign::kNegative).at(0);
    const auto& dict = result.dictionary();
    const bool ok =
        itemset_label(dict, pos->itemset) == "LSAT>41.0, UGPA>3.5, race=White, sex=Female" &&
        itemset_label(dict, neg->itemset) == "LSAT≤33.0, race=Black, sex=Male" &&
        std::abs(pos->divergence - 0.0206) <= 0.003 && std::abs(neg->divergence + 0.0283) <= 0.003;
    return Outcome{ok, "top {" + itemset_label(dict, pos->itemset) + "}" +
                           fmt(" div %.4f", pos->divergence) + "; bottom {" +
                           itemset_label(dict, neg->itemset) + "}" +
                           fmt(" div %.4f", neg->divergence)};
  });

  report(6, "attribution: sex=Male minor in COMPAS, race=Black dominant in Law School", [&] {
    if (!compas_fpr || !law_zfya) return Outcome{false, "requires criteria 3 and 4 data"};
    const auto& fpr = compas_fpr->result;
    const auto top = shapley(top_k_records(fpr, 1, Sign::kPositive).at(0)->itemset, fpr);
    const double male = contribution(fpr, top, "sex=Male");
    const double young = contribution(fpr, top, "age<25");
    const double priors = contribution(fpr, top, "#prior>3");
    const bool compas_ok = std::abs(male) < std::min(young, priors);

    auto dominant = [](const MiningResult& result) {
      const auto a = shapley(top_k_records(result, 1, Sign::kNegative).at(0)->itemset, result);
      auto best = a.contributions.front();
      for (const auto& c : a.contributions) {
        if (std::abs(c.second) > std::abs(best.second)) best = c;
      }
      return std::pair{result.dictionary().item(best.first).label, best.second};
    };
    const auto [zfya_item, zfya_value] = dominant(law_zfya->result);
    std::string detail = fmt("sex=Male %.4f, age<25 %.4f, #prior>3 %.4f", male, young, priors) +
                         "; ZFYA bottom dominated by " + zfya_item + fmt(" (%.4f)", zfya_value);
    bool rank_ok = true;
    if (law_rank) {
      const auto [rank_item, rank_value] = dominant(law_rank->result);
      rank_ok = rank_item == "race=Black";
      detail += "; rank bottom dominated by " + rank_item + fmt(" (%.4f)", rank_value);
    }
    return Outcome{compas_ok && zfya_item == "race=Black" && rank_ok, detail};
  });

  report(7, ">= 1e5 itemsets on ~20k rows within 60 s", [&] {
    // 20k rows, 12 attributes with 4 equally likely values.
    std::mt19937_64 rng(77);
    testing::Synthetic s;
    s.dictionary = testing::make_dictionary(std::vector<uint32_t>(12, 4));
    std::uniform_int_distribution<uint32_t> value(0, 3);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int r = 0; r < 20000; ++r) {
      std::vector<uint32_t> row(12);
      for (auto& v : row) v = value(rng);
      s.outcome.emplace_back(row[0] * 0.3 + noise(rng));
      s.values.push_back(std::move(row));
    }
    const auto dataset = s.dataset();
    const OutcomeVector outcome(s.outcome);
    MineOptions options;
    options.threshold = 0.002;
    options.threads = 0;
    const auto start = Clock::now();
    const auto result = mine(dataset, outcome, options);
    const double elapsed = seconds_since(start);
    const size_t n = result.records().size();
    return Outcome{n >= 100000 && elapsed <= 60.0,
                   std::to_string(n) + " itemsets in " + fmt("%.2f s", elapsed) + " with " +
                       std::to_string(std::max(1u, std::thread::hardware_concurrency())) +
                       " hardware threads"};
  });

  report(8, "COMPAS itemsets.csv identical with 1 and 8 workers", [&] {
    const auto dir = fs::temp_directory_path() / ("divminer_acceptance_" + std::to_string(getpid()));
    fs::create_directories(dir);
    if (run_cli("prepare compas --source " + data_file("compas-scores-two-years.csv") +
                " --out " + dir.string()) != 0) {
      return Outcome{false, "prepare failed"};
    }
    std::string outputs[2];
    const unsigned threads[2] = {1, 8};
    for (int i = 0; i < 2; ++i) {
      const auto out = dir / ("run" + std::to_string(threads[i]));
      const int status = run_cli("run --input " + (dir / "compas.csv").string() + " --spec " +
                                 (dir / "compas.spec.json").string() +
                                 " --outcome fpr:two_year_recid:predicted --support 0.0175" +
                                 " --format csv --threads " + std::to_string(threads[i]) +
                                 " --out " + out.string());
      if (status != 0) return Outcome{false, "cli exited with " + std::to_string(status)};
      outputs[i] = slurp(out / "itemsets.csv");
    }
    fs::remove_all(dir);
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    return Outcome{same, std::to_string(outputs[0].size()) + " bytes, " +
                             (same ? "identical" : "DIFFERENT")};
  });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
