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

#ifndef DIVMINER_DISCRETIZE_HPP_
#define DIVMINER_DISCRETIZE_HPP_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "divminer/csv.hpp"
#include "divminer/dataset.hpp"

namespace divminer {

enum class MissingPolicy { kDropRow, kOwnCategory };

struct ColumnStrategy {
  enum class Kind { kCategorical, kQuantile, kEdges, kMapping, kIgnore };

  Kind kind = Kind::kCategorical;
  int bins = 3;                              // kQuantile
  std::vector<double> edges;                 // kEdges, strictly increasing
  std::map<std::string, std::string> mapping;  // kMapping: raw value -> label

  static ColumnStrategy categorical() { return {}; }
  static ColumnStrategy quantile(int bins);
  static ColumnStrategy explicit_edges(std::vector<double> edges);
  static ColumnStrategy explicit_mapping(std::map<std::string, std::string> mapping);
  static ColumnStrategy ignore();

  // Throws Error(kInvalidArgument) on bins < 2 or unsorted edges.
  void validate(std::string_view column) const;
};

// Per-column discretization. Columns without an entry use numeric_default
// when every non-missing cell is numeric, and categorical otherwise.
//
// JSON form:
//   {"missing": "drop-row" | "own-category",
//    "numeric_default": {"strategy": "quantile", "bins": 3},
//    "columns": {
//      "LSAT": {"strategy": "edges", "edges": [33.0, 41.0]},
//      "race": {"strategy": "categorical"},
//      "x":    {"strategy": "quantile", "bins": 4},
//      "y":    {"strategy": "mapping", "mapping": {"1": "low", "2": "high"}},
//      "id":   {"strategy": "ignore"}}}
struct DiscretizationSpec {
  std::map<std::string, ColumnStrategy> columns;
  ColumnStrategy numeric_default = ColumnStrategy::quantile(3);
  MissingPolicy missing = MissingPolicy::kDropRow;

  static DiscretizationSpec from_json(std::string_view text);
  static DiscretizationSpec load(const std::string& path);
  std::string to_json() const;
};

// Label for a categorical value: "col<25" when the value starts with a
// comparison operator, "col=value" otherwise.
std::string categorical_label(std::string_view column, std::string_view value);

// Interval labels for right-closed bins over the given cut points:
// "col≤e0", "col=(e0-e1]", ..., "col>eN". Edges are printed with at least
// `decimals` fractional digits.
std::vector<std::string> interval_labels(std::string_view column,
                                         const std::vector<double>& edges,
                                         int decimals);

// Index of the right-closed bin holding `value`.
size_t bin_index(const std::vector<double>& edges, double value);

// Cut points splitting `values` into `bins` right-closed quantile bins.
// Duplicate cut points (ties) and cut points at the maximum are merged away,
// so the result may hold fewer than bins - 1 edges.
std::vector<double> quantile_edges(std::vector<double> values, int bins);

// Builds the item dictionary and encodes every retained row. Columns named in
// `exclude` are not mined. Rows with a missing cell in a mined column are
// dropped under kDropRow; under kOwnCategory they get a "col=missing" item.
DiscretizedDataset discretize(const RawTable& table, const DiscretizationSpec& spec,
                              const std::set<std::string>& exclude = {});

}  // namespace divminer

#endif  // DIVMINER_DISCRETIZE_HPP_
