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

// C interface to libdivminer.
//
// Every object is an opaque handle created by a dm_*_create/load/build call
// and released with the matching dm_*_free. Functions returning dm_status
// store a description of any failure, retrievable with dm_last_error() on the
// same thread until the next failing call. Strings returned by the library
// stay valid for the lifetime of the handle they came from.
//
// Typical pipeline:
//
//   dm_table* table;      dm_table_load_csv("data.csv", ',', 1, &table);
//   dm_dataset* dataset;  dm_dataset_discretize(table, NULL, "fpr:truth:pred", &dataset);
//   dm_outcome* outcome;  dm_outcome_build(table, dataset, "fpr:truth:pred", &outcome);
//   dm_mine_options opts; dm_mine_options_init(&opts); opts.support = 0.02;
//   dm_result* result;    dm_mine(dataset, outcome, &opts, &result);

#ifndef DIVMINER_DIVMINER_H_
#define DIVMINER_DIVMINER_H_

#include <stddef.h>
#include <stdint.h>

#if defined(DIVMINER_BUILDING)
#define DM_API __attribute__((visibility("default")))
#else
#define DM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dm_status {
  DM_OK = 0,
  DM_ERROR_INVALID_ARGUMENT = 1,
  DM_ERROR_IO = 2,
  DM_ERROR_PARSE = 3,
  DM_ERROR_UNDEFINED_OUTCOME = 4,  // every row excluded from the statistic
  DM_ERROR_RECORD_CAP = 5,         // too many itemsets at this support
  DM_ERROR_MISSING_SUBSET = 6,     // attribution needs an unmined subset
  DM_ERROR_INTERNAL = 99
} dm_status;

typedef enum dm_sign {
  DM_SIGN_POSITIVE = 0,
  DM_SIGN_NEGATIVE = 1,
  DM_SIGN_ABSOLUTE = 2,
  DM_SIGN_BOTH = 3  // markdown only: a positive and a negative block
} dm_sign;

typedef enum dm_baseline {
  DM_BASELINE_GLOBAL = 0,
  DM_BASELINE_COMPLEMENT = 1
} dm_baseline;

typedef struct dm_table dm_table;
typedef struct dm_dataset dm_dataset;
typedef struct dm_outcome dm_outcome;
typedef struct dm_result dm_result;
typedef struct dm_attribution dm_attribution;

DM_API const char* dm_version(void);
DM_API const char* dm_status_name(dm_status status);
// Message of the last failure on this thread ("" if none).
DM_API const char* dm_last_error(void);

// ---- tables ---------------------------------------------------------------

DM_API dm_status dm_table_load_csv(const char* path, char delimiter, int has_header,
                                   dm_table** out);
DM_API void dm_table_free(dm_table* table);
DM_API size_t dm_table_num_rows(const dm_table* table);
DM_API size_t dm_table_num_columns(const dm_table* table);
DM_API const char* dm_table_column_name(const dm_table* table, size_t index);

// ---- discretized datasets -------------------------------------------------

// spec_json: discretization spec document text, or NULL for defaults.
// exclude_outcome_spec: if not NULL, the columns that outcome spec reads are
// left out of the mined attributes.
DM_API dm_status dm_dataset_discretize(const dm_table* table, const char* spec_json,
                                       const char* exclude_outcome_spec, dm_dataset** out);
DM_API void dm_dataset_free(dm_dataset* dataset);
DM_API size_t dm_dataset_num_rows(const dm_dataset* dataset);
DM_API size_t dm_dataset_num_attributes(const dm_dataset* dataset);
DM_API size_t dm_dataset_num_items(const dm_dataset* dataset);
DM_API const char* dm_dataset_item_label(const dm_dataset* dataset, size_t item);

// ---- outcomes -------------------------------------------------------------

// Evaluates the outcome spec over the dataset's retained rows.
DM_API dm_status dm_outcome_build(const dm_table* table, const dm_dataset* dataset,
                                  const char* outcome_spec, dm_outcome** out);
DM_API void dm_outcome_free(dm_outcome* outcome);
DM_API uint64_t dm_outcome_global_count(const dm_outcome* outcome);
DM_API double dm_outcome_global_mean(const dm_outcome* outcome);

// ---- mining ---------------------------------------------------------------

typedef struct dm_mine_options {
  double support;        // threshold in (0, 1]
  unsigned threads;      // 0 = hardware concurrency
  uint64_t max_records;  // abort with DM_ERROR_RECORD_CAP above this
  dm_baseline baseline;
} dm_mine_options;

DM_API void dm_mine_options_init(dm_mine_options* options);
DM_API dm_status dm_mine(const dm_dataset* dataset, const dm_outcome* outcome,
                         const dm_mine_options* options, dm_result** out);
DM_API void dm_result_free(dm_result* result);

typedef struct dm_record_info {
  size_t itemset_size;
  double support;
  uint64_t match_count;
  uint64_t outcome_count;
  double outcome_mean;  // NaN when outcome_count == 0
  double divergence;    // NaN when outcome_count == 0
  double t_value;       // valid when t_defined; may be +inf
  int t_defined;
} dm_record_info;

DM_API size_t dm_result_num_records(const dm_result* result);
DM_API uint64_t dm_result_num_rows(const dm_result* result);
DM_API dm_status dm_result_record(const dm_result* result, size_t index, dm_record_info* out);
// "a=1, b=2"; "(all)" for the empty itemset at index 0.
DM_API const char* dm_result_record_label(const dm_result* result, size_t index);
// Parses an itemset written as item labels joined by ", ".
DM_API dm_status dm_result_find(const dm_result* result, const char* itemset, size_t* index);
// Writes up to capacity record indices of the k most divergent itemsets
// (DM_SIGN_BOTH is not accepted here). *count receives the number written.
DM_API dm_status dm_result_top(const dm_result* result, size_t k, dm_sign sign, size_t* indices,
                               size_t capacity, size_t* count);

DM_API dm_status dm_result_write_csv(const dm_result* result, const char* path);
DM_API dm_status dm_result_write_json(const dm_result* result, const char* path);
DM_API dm_status dm_result_load_json(const char* path, dm_result** out);
DM_API dm_status dm_result_write_markdown(const dm_result* result, size_t k, dm_sign sign,
                                          const char* path);

// ---- attribution ----------------------------------------------------------

DM_API dm_status dm_shapley(const dm_result* result, size_t record_index, dm_attribution** out);
// selection: "top<k>-<positive|negative|absolute>" or "itemset:<labels>".
// Writes up to capacity record indices of the selected itemsets.
DM_API dm_status dm_shapley_select(const dm_result* result, const char* selection,
                                   size_t* indices, size_t capacity, size_t* count);
DM_API void dm_attribution_free(dm_attribution* attribution);
DM_API size_t dm_attribution_size(const dm_attribution* attribution);
DM_API const char* dm_attribution_item_label(const dm_attribution* attribution, size_t index);
DM_API double dm_attribution_contribution(const dm_attribution* attribution, size_t index);
DM_API double dm_attribution_divergence(const dm_attribution* attribution);
DM_API double dm_attribution_residual(const dm_attribution* attribution);
DM_API dm_status dm_attribution_write_json(const dm_attribution* attribution, const char* path);
DM_API dm_status dm_attribution_write_svg(const dm_attribution* attribution, const char* path);

// ---- dataset preparation --------------------------------------------------

// name: "compas" or "lawschool". Writes <out_dir>/<name>.csv and
// <out_dir>/<name>.spec.json. high_risk_decile applies to COMPAS only
// (0 = default of 8).
DM_API dm_status dm_prepare_dataset(const char* name, const char* source_path,
                                    const char* out_dir, int high_risk_decile);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // DIVMINER_DIVMINER_H_
