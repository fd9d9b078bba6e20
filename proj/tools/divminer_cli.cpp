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

// divminer command-line tool.
//
//   divminer run --input data.csv --outcome fpr:truth:pred --support 0.02 --out report/
//   divminer prepare compas --source compas-scores-two-years.csv --out prepared/
//
// Exit status: 0 success, 1 invalid usage or configuration, 2 data or I/O
// error, 3 record cap exceeded.

#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "divminer/divminer.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRecordCap = 3;

struct RunConfig {
  std::string input;
  std::string spec;
  std::string outcome;
  double support = 0.01;
  size_t top = 10;
  std::string sign;  // empty: positive and negative blocks
  std::string shapley;
  std::string out = "divminer-out";
  std::string format = "all";
  unsigned threads = 1;
  uint64_t max_records = 5'000'000;
  std::string compare = "global";
  char delimiter = ',';
  bool mine_outcome_columns = false;
};

struct PrepareConfig {
  std::string name;
  std::string source;
  std::string out = ".";
  int high_risk_decile = 8;
};

// Single-line diagnostic; returns the exit status for the failure.
int report(dm_status status, const std::string& context) {
  std::fprintf(stderr, "divminer: %s: %s\n", context.c_str(), dm_last_error());
  if (status == DM_ERROR_RECORD_CAP) return kExitRecordCap;
  if (status == DM_ERROR_INVALID_ARGUMENT) return kExitUsage;
  return kExitData;
}

int usage_error(const std::string& message) {
  std::fprintf(stderr, "divminer: %s\n", message.c_str());
  return kExitUsage;
}

// RAII holders for the C handles.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
};

using Table = Handle<dm_table, dm_table_free>;
using Dataset = Handle<dm_dataset, dm_dataset_free>;
using Outcome = Handle<dm_outcome, dm_outcome_free>;
using Result = Handle<dm_result, dm_result_free>;
using Attribution = Handle<dm_attribution, dm_attribution_free>;

// File-name-safe form of an itemset label.
std::string slug(const std::string& label) {
  std::string out;
  for (size_t i = 0; i < label.size() && out.size() < 80; ++i) {
    const char c = label[i];
    if (label.compare(i, 3, "≤") == 0) {
      out += "le";
      i += 2;
    } else if (label.compare(i, 3, "≥") == 0) {
      out += "ge";
      i += 2;
    } else if (c == '<') {
      out += "lt";
    } else if (c == '>') {
      out += "gt";
    } else if (c == '=') {
      out += '-';
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
      out += c;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "all" : out;
}

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return true;
}

int write_shapley(const dm_result* result, const RunConfig& config,
                  const std::filesystem::path& out_dir) {
  const size_t n = dm_result_num_records(result);
  std::vector<size_t> indices(n);
  size_t count = 0;
  dm_status status =
      dm_shapley_select(result, config.shapley.c_str(), indices.data(), indices.size(), &count);
  if (status != DM_OK) return report(status, "--shapley");

  const auto dir = out_dir / "shapley";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return usage_error("cannot create '" + dir.string() + "': " + ec.message());
  for (size_t i = 0; i < count; ++i) {
    Attribution attribution;
    status = dm_shapley(result, indices[i], &attribution.ptr);
    if (status != DM_OK) return report(status, "shapley");
    const std::string base =
        (dir / (std::to_string(i + 1) + "_" + slug(dm_result_record_label(result, indices[i]))))
            .string();
    if ((status = dm_attribution_write_json(attribution.ptr, (base + ".json").c_str())) != DM_OK ||
        (status = dm_attribution_write_svg(attribution.ptr, (base + ".svg").c_str())) != DM_OK) {
      return report(status, "shapley");
    }
  }
  return 0;
}

int run(const RunConfig& config) {
  if (!(config.support > 0.0 && config.support <= 1.0)) {
    return usage_error("--support must be in (0, 1], got " + std::to_string(config.support));
  }
  if (config.top < 1) return usage_error("--top must be at least 1");
  if (config.max_records < 1) return usage_error("--max-records must be at least 1");

  dm_sign sign = DM_SIGN_BOTH;
  if (config.sign == "pos") sign = DM_SIGN_POSITIVE;
  if (config.sign == "neg") sign = DM_SIGN_NEGATIVE;
  if (config.sign == "abs") sign = DM_SIGN_ABSOLUTE;

  const auto start = std::chrono::steady_clock::now();

  std::string spec_text;
  if (!config.spec.empty() && !read_file(config.spec, spec_text)) {
    std::fprintf(stderr, "divminer: cannot read spec '%s'\n", config.spec.c_str());
    return kExitData;
  }

  Table table;
  dm_status status = dm_table_load_csv(config.input.c_str(), config.delimiter, 1, &table.ptr);
  if (status != DM_OK) return report(status, "--input");

  Dataset dataset;
  status = dm_dataset_discretize(table.ptr, config.spec.empty() ? nullptr : spec_text.c_str(),
                                 config.mine_outcome_columns ? nullptr : config.outcome.c_str(),
                                 &dataset.ptr);
  if (status != DM_OK) return report(status, "discretize");

  Outcome outcome;
  status = dm_outcome_build(table.ptr, dataset.ptr, config.outcome.c_str(), &outcome.ptr);
  if (status != DM_OK) return report(status, "--outcome");

  dm_mine_options options;
  dm_mine_options_init(&options);
  options.support = config.support;
  options.threads = config.threads;
  options.max_records = config.max_records;
  options.baseline = config.compare == "complement" ? DM_BASELINE_COMPLEMENT : DM_BASELINE_GLOBAL;
  Result result;
  status = dm_mine(dataset.ptr, outcome.ptr, &options, &result.ptr);
  if (status != DM_OK) return report(status, "mine");

  const std::filesystem::path out_dir(config.out);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "divminer: cannot create '%s': %s\n", config.out.c_str(),
                 ec.message().c_str());
    return kExitData;
  }
  const bool all = config.format == "all";
  if (all || config.format == "csv") {
    status = dm_result_write_csv(result.ptr, (out_dir / "itemsets.csv").c_str());
    if (status != DM_OK) return report(status, "write");
  }
  if (all || config.format == "json") {
    status = dm_result_write_json(result.ptr, (out_dir / "itemsets.json").c_str());
    if (status != DM_OK) return report(status, "write");
  }
  if (all || config.format == "md") {
    status = dm_result_write_markdown(result.ptr, config.top, sign, (out_dir / "top.md").c_str());
    if (status != DM_OK) return report(status, "write");
  }
  if (!config.shapley.empty()) {
    if (const int code = write_shapley(result.ptr, config, out_dir); code != 0) return code;
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("rows: %llu\n", static_cast<unsigned long long>(dm_result_num_rows(result.ptr)));
  std::printf("itemsets: %zu\n", dm_result_num_records(result.ptr));
  std::printf("global outcome: %.4f\n", dm_outcome_global_mean(outcome.ptr));
  std::printf("elapsed: %.4f s\n", elapsed);
  return 0;
}

int prepare(const PrepareConfig& config) {
  const dm_status status = dm_prepare_dataset(config.name.c_str(), config.source.c_str(),
                                              config.out.c_str(), config.high_risk_decile);
  if (status != DM_OK) return report(status, "prepare " + config.name);
  std::printf("wrote %s\n", (std::filesystem::path(config.out) / (config.name + ".csv")).c_str());
  std::printf("wrote %s\n",
              (std::filesystem::path(config.out) / (config.name + ".spec.json")).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine frequent itemsets whose outcome diverges from the dataset average."};
  app.set_version_flag("--version", dm_version());
  app.require_subcommand(1);

  RunConfig run_config;
  auto* run_cmd = app.add_subcommand("run", "Mine divergent itemsets and write reports");
  run_cmd->add_option("--input", run_config.input, "Input CSV file")->required();
  run_cmd->add_option("--spec", run_config.spec, "Discretization spec (JSON)");
  run_cmd->add_option("--outcome", run_config.outcome,
                      "attribute:COL | fpr|fnr|tpr|tnr|error|accuracy:TRUTH:PRED | "
                      "rank:COL[:desc|asc]:topk=K|power=A|linear[=N]|table=v1|v2...")
      ->required();
  run_cmd->add_option("--support", run_config.support, "Support threshold in (0, 1]")
      ->capture_default_str();
  run_cmd->add_option("--top", run_config.top, "Itemsets per top.md block")->capture_default_str();
  run_cmd->add_option("--sign", run_config.sign, "Ranking for top.md (default: pos and neg)")
      ->check(CLI::IsMember({"pos", "neg", "abs"}));
  run_cmd->add_option("--shapley", run_config.shapley,
                      "Attribute topK-positive|negative|absolute or itemset:LABELS");
  run_cmd->add_option("--out", run_config.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--format", run_config.format, "Reports to write")
      ->check(CLI::IsMember({"csv", "json", "md", "all"}))
      ->capture_default_str();
  run_cmd->add_option("--threads", run_config.threads, "Mining threads (0 = all cores)")
      ->capture_default_str();
  run_cmd->add_option("--max-records", run_config.max_records, "Abort above this many itemsets")
      ->capture_default_str();
  run_cmd->add_option("--compare", run_config.compare, "Baseline for Welch's t")
      ->check(CLI::IsMember({"global", "complement"}))
      ->capture_default_str();
  run_cmd->add_option("--delimiter", run_config.delimiter, "CSV field delimiter");
  run_cmd->add_flag("--mine-outcome-columns", run_config.mine_outcome_columns,
                    "Also mine the columns the outcome reads");

  PrepareConfig prepare_config;
  auto* prepare_cmd =
      app.add_subcommand("prepare", "Prepare the COMPAS or Law School source file for mining");
  prepare_cmd->add_option("name", prepare_config.name, "compas or lawschool")
      ->required()
      ->check(CLI::IsMember({"compas", "lawschool"}));
  prepare_cmd->add_option("--source", prepare_config.source, "Raw source CSV")->required();
  prepare_cmd->add_option("--out", prepare_config.out, "Output directory")->capture_default_str();
  prepare_cmd->add_option("--high-risk-decile", prepare_config.high_risk_decile,
                          "COMPAS: decile score at or above which the prediction is positive")
      ->check(CLI::Range(1, 10))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (run_cmd->parsed()) return run(run_config);
  return prepare(prepare_config);
}
