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

#include "divminer/divminer.h"

#include <cmath>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <new>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>

#include "divminer/csv.hpp"
#include "divminer/dataset.hpp"
#include "divminer/discretize.hpp"
#include "divminer/error.hpp"
#include "divminer/miner.hpp"
#include "divminer/outcome.hpp"
#include "divminer/prepare.hpp"
#include "divminer/report.hpp"
#include "divminer/shapley.hpp"

struct dm_table {
  divminer::RawTable table;
};

struct dm_dataset {
  divminer::DiscretizedDataset dataset;
};

struct dm_outcome {
  divminer::OutcomeVector values;
  std::string description;
};

struct dm_result {
  explicit dm_result(divminer::MiningResult r) : result(std::move(r)) {}

  divminer::MiningResult result;
  // Labels handed out through the C API, built on first request.
  mutable std::mutex label_mutex;
  mutable std::unordered_map<size_t, std::string> labels;
};

struct dm_attribution {
  std::shared_ptr<const divminer::ItemDictionary> dictionary;
  divminer::ShapleyAttribution attribution;
};

namespace {

thread_local std::string g_last_error;

dm_status to_status(divminer::ErrorCode code) {
  using divminer::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return DM_ERROR_INVALID_ARGUMENT;
    case ErrorCode::kIo: return DM_ERROR_IO;
    case ErrorCode::kParse: return DM_ERROR_PARSE;
    case ErrorCode::kUndefinedOutcome: return DM_ERROR_UNDEFINED_OUTCOME;
    case ErrorCode::kRecordCap: return DM_ERROR_RECORD_CAP;
    case ErrorCode::kMissingSubset: return DM_ERROR_MISSING_SUBSET;
  }
  return DM_ERROR_INTERNAL;
}

dm_status fail(dm_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename F>
dm_status guarded(F&& body) {
  try {
    body();
    return DM_OK;
  } catch (const divminer::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DM_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DM_ERROR_INTERNAL, e.what());
  }
}

#define DM_REQUIRE(cond, what) \
  if (!(cond)) return fail(DM_ERROR_INVALID_ARGUMENT, what)

std::optional<divminer::Sign> to_sign(dm_sign sign) {
  switch (sign) {
    case DM_SIGN_POSITIVE: return divminer::Sign::kPositive;
    case DM_SIGN_NEGATIVE: return divminer::Sign::kNegative;
    case DM_SIGN_ABSOLUTE: return divminer::Sign::kAbsolute;
    default: return std::nullopt;
  }
}

void write_stream(const std::string& path, const divminer::MiningResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw divminer::Error(divminer::ErrorCode::kIo, "cannot write '" + path + "'");
  divminer::write_itemsets_csv(result, out);
  if (!out) throw divminer::Error(divminer::ErrorCode::kIo, "write to '" + path + "' failed");
}

}  // namespace

extern "C" {

const char* dm_version(void) { return "0.1.0"; }

const char* dm_status_name(dm_status status) {
  switch (status) {
    case DM_OK: return "ok";
    case DM_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case DM_ERROR_IO: return "i/o error";
    case DM_ERROR_PARSE: return "parse error";
    case DM_ERROR_UNDEFINED_OUTCOME: return "undefined outcome";
    case DM_ERROR_RECORD_CAP: return "record cap exceeded";
    case DM_ERROR_MISSING_SUBSET: return "missing subset";
    case DM_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dm_last_error(void) { return g_last_error.c_str(); }

dm_status dm_table_load_csv(const char* path, char delimiter, int has_header, dm_table** out) {
  DM_REQUIRE(path && out, "dm_table_load_csv: null argument");
  *out = nullptr;
  return guarded([&] {
    divminer::CsvOptions options;
    options.delimiter = delimiter;
    options.has_header = has_header != 0;
    *out = new dm_table{divminer::load_csv(path, options)};
  });
}

void dm_table_free(dm_table* table) { delete table; }

size_t dm_table_num_rows(const dm_table* table) { return table ? table->table.num_rows() : 0; }

size_t dm_table_num_columns(const dm_table* table) {
  return table ? table->table.num_columns() : 0;
}

const char* dm_table_column_name(const dm_table* table, size_t index) {
  if (!table || index >= table->table.num_columns()) return nullptr;
  return table->table.column_names[index].c_str();
}

dm_status dm_dataset_discretize(const dm_table* table, const char* spec_json,
                                const char* exclude_outcome_spec, dm_dataset** out) {
  DM_REQUIRE(table && out, "dm_dataset_discretize: null argument");
  *out = nullptr;
  return guarded([&] {
    divminer::DiscretizationSpec spec;
    if (spec_json) spec = divminer::DiscretizationSpec::from_json(spec_json);
    std::set<std::string> exclude;
    if (exclude_outcome_spec) {
      for (auto& column : divminer::OutcomeSpec::parse(exclude_outcome_spec).source_columns()) {
        const auto index = table->table.find_column(column);
        exclude.insert(index ? table->table.column_names[*index] : column);
      }
    }
    *out = new dm_dataset{divminer::discretize(table->table, spec, exclude)};
  });
}

void dm_dataset_free(dm_dataset* dataset) { delete dataset; }

size_t dm_dataset_num_rows(const dm_dataset* dataset) {
  return dataset ? dataset->dataset.num_rows() : 0;
}

size_t dm_dataset_num_attributes(const dm_dataset* dataset) {
  return dataset ? dataset->dataset.num_attributes() : 0;
}

size_t dm_dataset_num_items(const dm_dataset* dataset) {
  return dataset ? dataset->dataset.dictionary().num_items() : 0;
}

const char* dm_dataset_item_label(const dm_dataset* dataset, size_t item) {
  if (!dataset || item >= dataset->dataset.dictionary().num_items()) return nullptr;
  return dataset->dataset.dictionary().item(static_cast<divminer::ItemId>(item)).label.c_str();
}

dm_status dm_outcome_build(const dm_table* table, const dm_dataset* dataset,
                           const char* outcome_spec, dm_outcome** out) {
  DM_REQUIRE(table && dataset && outcome_spec && out, "dm_outcome_build: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto spec = divminer::OutcomeSpec::parse(outcome_spec);
    auto values = divminer::build_outcome(table->table, spec, dataset->dataset.source_rows());
    *out = new dm_outcome{std::move(values), spec.text};
  });
}

void dm_outcome_free(dm_outcome* outcome) { delete outcome; }

uint64_t dm_outcome_global_count(const dm_outcome* outcome) {
  return outcome ? outcome->values.global_count() : 0;
}

double dm_outcome_global_mean(const dm_outcome* outcome) {
  return outcome ? outcome->values.global_mean() : std::nan("");
}

void dm_mine_options_init(dm_mine_options* options) {
  if (!options) return;
  const divminer::MineOptions defaults;
  options->support = defaults.threshold;
  options->threads = defaults.threads;
  options->max_records = defaults.max_records;
  options->baseline = DM_BASELINE_GLOBAL;
}

dm_status dm_mine(const dm_dataset* dataset, const dm_outcome* outcome,
                  const dm_mine_options* options, dm_result** out) {
  DM_REQUIRE(dataset && outcome && out, "dm_mine: null argument");
  *out = nullptr;
  dm_mine_options local;
  dm_mine_options_init(&local);
  if (options) local = *options;
  DM_REQUIRE(local.baseline == DM_BASELINE_GLOBAL || local.baseline == DM_BASELINE_COMPLEMENT,
             "dm_mine: unknown baseline");
  return guarded([&] {
    divminer::MineOptions mine_options;
    mine_options.threshold = local.support;
    mine_options.threads = local.threads;
    mine_options.max_records = local.max_records;
    mine_options.baseline = local.baseline == DM_BASELINE_COMPLEMENT
                                ? divminer::Baseline::kComplement
                                : divminer::Baseline::kGlobal;
    mine_options.outcome_description = outcome->description;
    *out = new dm_result(divminer::mine(dataset->dataset, outcome->values, mine_options));
  });
}

void dm_result_free(dm_result* result) { delete result; }

size_t dm_result_num_records(const dm_result* result) {
  return result ? result->result.records().size() : 0;
}

uint64_t dm_result_num_rows(const dm_result* result) {
  return result ? result->result.metadata().n_rows : 0;
}

dm_status dm_result_record(const dm_result* result, size_t index, dm_record_info* out) {
  DM_REQUIRE(result && out, "dm_result_record: null argument");
  DM_REQUIRE(index < result->result.records().size(), "dm_result_record: index out of range");
  const auto& record = result->result.records()[index];
  out->itemset_size = record.itemset.size();
  out->support = record.support;
  out->match_count = record.match_count;
  out->outcome_count = record.outcome_count;
  out->outcome_mean = record.outcome_mean;
  out->divergence = record.divergence;
  out->t_defined = record.t_value.has_value() ? 1 : 0;
  out->t_value = record.t_value.value_or(std::nan(""));
  return DM_OK;
}

const char* dm_result_record_label(const dm_result* result, size_t index) {
  if (!result || index >= result->result.records().size()) return nullptr;
  std::lock_guard lock(result->label_mutex);
  auto it = result->labels.find(index);
  if (it == result->labels.end()) {
    it = result->labels
             .emplace(index, divminer::itemset_label(result->result.dictionary(),
                                                     result->result.records()[index].itemset))
             .first;
  }
  return it->second.c_str();
}

dm_status dm_result_find(const dm_result* result, const char* itemset, size_t* index) {
  DM_REQUIRE(result && itemset && index, "dm_result_find: null argument");
  return guarded([&] {
    const auto parsed = divminer::parse_itemset(result->result.dictionary(), itemset);
    const auto found = result->result.index_of(parsed);
    if (!found) {
      throw divminer::Error(divminer::ErrorCode::kMissingSubset,
                            std::string("itemset '") + itemset + "' was not mined");
    }
    *index = *found;
  });
}

dm_status dm_result_top(const dm_result* result, size_t k, dm_sign sign, size_t* indices,
                        size_t capacity, size_t* count) {
  DM_REQUIRE(result && count && (indices || capacity == 0), "dm_result_top: null argument");
  const auto parsed = to_sign(sign);
  DM_REQUIRE(parsed, "dm_result_top: sign must be positive, negative or absolute");
  return guarded([&] {
    const auto top = divminer::top_k_records(result->result, k, *parsed);
    const auto& records = result->result.records();
    size_t written = 0;
    for (const auto* record : top) {
      if (written == capacity) break;
      indices[written++] = static_cast<size_t>(record - records.data());
    }
    *count = written;
  });
}

dm_status dm_result_write_csv(const dm_result* result, const char* path) {
  DM_REQUIRE(result && path, "dm_result_write_csv: null argument");
  return guarded([&] { write_stream(path, result->result); });
}

dm_status dm_result_write_json(const dm_result* result, const char* path) {
  DM_REQUIRE(result && path, "dm_result_write_json: null argument");
  return guarded([&] { divminer::write_text_file(path, divminer::result_to_json(result->result)); });
}

dm_status dm_result_load_json(const char* path, dm_result** out) {
  DM_REQUIRE(path && out, "dm_result_load_json: null argument");
  *out = nullptr;
  return guarded([&] { *out = new dm_result(divminer::load_result_json(path)); });
}

dm_status dm_result_write_markdown(const dm_result* result, size_t k, dm_sign sign,
                                   const char* path) {
  DM_REQUIRE(result && path, "dm_result_write_markdown: null argument");
  const auto parsed = to_sign(sign);
  DM_REQUIRE(parsed || sign == DM_SIGN_BOTH, "dm_result_write_markdown: unknown sign");
  return guarded([&] {
    divminer::write_text_file(path, divminer::render_top_markdown(result->result, k, parsed));
  });
}

dm_status dm_shapley(const dm_result* result, size_t record_index, dm_attribution** out) {
  DM_REQUIRE(result && out, "dm_shapley: null argument");
  *out = nullptr;
  DM_REQUIRE(record_index < result->result.records().size(), "dm_shapley: index out of range");
  return guarded([&] {
    auto attribution =
        divminer::shapley(result->result.records()[record_index].itemset, result->result);
    *out = new dm_attribution{result->result.shared_dictionary(), std::move(attribution)};
  });
}

dm_status dm_shapley_select(const dm_result* result, const char* selection, size_t* indices,
                            size_t capacity, size_t* count) {
  DM_REQUIRE(result && selection && count && (indices || capacity == 0),
             "dm_shapley_select: null argument");
  return guarded([&] {
    const auto parsed = divminer::parse_shapley_selection(result->result.dictionary(), selection);
    std::vector<size_t> selected;
    if (const auto* top = std::get_if<divminer::TopSelection>(&parsed)) {
      const auto& records = result->result.records();
      for (const auto* record : divminer::top_k_records(result->result, top->k, top->sign)) {
        selected.push_back(static_cast<size_t>(record - records.data()));
      }
    } else {
      const auto& itemset = std::get<divminer::Itemset>(parsed);
      const auto found = result->result.index_of(itemset);
      if (!found) {
        throw divminer::Error(divminer::ErrorCode::kMissingSubset,
                              "itemset '" + divminer::itemset_label(result->result.dictionary(),
                                                                    itemset) +
                                  "' was not mined");
      }
      selected.push_back(*found);
    }
    size_t written = 0;
    for (size_t index : selected) {
      if (written == capacity) break;
      indices[written++] = index;
    }
    *count = written;
  });
}

void dm_attribution_free(dm_attribution* attribution) { delete attribution; }

size_t dm_attribution_size(const dm_attribution* attribution) {
  return attribution ? attribution->attribution.contributions.size() : 0;
}

const char* dm_attribution_item_label(const dm_attribution* attribution, size_t index) {
  if (!attribution || index >= attribution->attribution.contributions.size()) return nullptr;
  return attribution->dictionary->item(attribution->attribution.contributions[index].first)
      .label.c_str();
}

double dm_attribution_contribution(const dm_attribution* attribution, size_t index) {
  if (!attribution || index >= attribution->attribution.contributions.size()) {
    return std::nan("");
  }
  return attribution->attribution.contributions[index].second;
}

double dm_attribution_divergence(const dm_attribution* attribution) {
  return attribution ? attribution->attribution.divergence : std::nan("");
}

double dm_attribution_residual(const dm_attribution* attribution) {
  return attribution ? attribution->attribution.residual : std::nan("");
}

dm_status dm_attribution_write_json(const dm_attribution* attribution, const char* path) {
  DM_REQUIRE(attribution && path, "dm_attribution_write_json: null argument");
  return guarded([&] {
    divminer::write_text_file(
        path, divminer::attribution_to_json(*attribution->dictionary, attribution->attribution));
  });
}

dm_status dm_attribution_write_svg(const dm_attribution* attribution, const char* path) {
  DM_REQUIRE(attribution && path, "dm_attribution_write_svg: null argument");
  return guarded([&] {
    divminer::write_text_file(path, divminer::render_attribution_svg(*attribution->dictionary,
                                                                     attribution->attribution));
  });
}

dm_status dm_prepare_dataset(const char* name, const char* source_path, const char* out_dir,
                             int high_risk_decile) {
  DM_REQUIRE(name && source_path && out_dir, "dm_prepare_dataset: null argument");
  DM_REQUIRE(high_risk_decile >= 0 && high_risk_decile <= 10,
             "dm_prepare_dataset: high_risk_decile must be in 1..10");
  return guarded([&] {
    divminer::PrepareOptions options;
    if (high_risk_decile > 0) options.high_risk_decile = high_risk_decile;
    divminer::write_prepared(divminer::prepare_dataset(name, source_path, options), out_dir);
  });
}

}  // extern "C"
