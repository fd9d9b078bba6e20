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

#ifndef DIVMINER_PREPARE_HPP_
#define DIVMINER_PREPARE_HPP_

#include <string>
#include <string_view>

#include "divminer/csv.hpp"
#include "divminer/discretize.hpp"

namespace divminer {

// Preparation of the two reference datasets.
//
// COMPAS (ProPublica compas-scores-two-years.csv):
//   rows: |days_b_screening_arrest| <= 30, is_recid != -1,
//         c_charge_degree != "O", score_text != "N/A"
//   age     <25 | 25-45 | >45            (from age_cat)
//   charge  F | M                        (c_charge_degree)
//   #prior  0 | [1,3] | >3               (priors_count)
//   race    Afr-Am | Asian | Cauc | Hispanic | Native-Am | Other
//   sex     Female | Male
//   stay    <week (<= 7 days) | 1w-3M (<= 93 days) | >3Months,
//           from c_jail_out - c_jail_in in whole days
//   two_year_recid  ground truth (0/1)
//   predicted       decile_score >= high_risk_decile (0/1); the default 8
//                   is the "High" score band
//
// Law School (the common law_data.csv preparation, either the original file
// with race/sex columns or the one-hot variant with Race_* and Sex_1/Sex_2):
//   LSAT  edges 33.0, 41.0
//   UGPA  edges 3.0, 3.5
//   race  Amerindian | Asian | Black | Hispanic | Mexican | Other |
//         Puertorican | White
//   sex   Female (code 1) | Male (code 2)
//   ZFYA  outcome column, never mined
struct PrepareOptions {
  int high_risk_decile = 8;
};

struct PreparedDataset {
  std::string name;
  RawTable table;
  DiscretizationSpec spec;
};

PreparedDataset prepare_compas(const RawTable& source, const PrepareOptions& options = {});
PreparedDataset prepare_lawschool(const RawTable& source);

// Dispatches on name ("compas" or "lawschool"). Throws Error(kIo) for an
// unreadable source and Error(kParse) listing missing source columns.
PreparedDataset prepare_dataset(std::string_view name, const std::string& source_path,
                                const PrepareOptions& options = {});

// Writes <dir>/<name>.csv and <dir>/<name>.spec.json, creating dir.
void write_prepared(const PreparedDataset& prepared, const std::string& out_dir);

}  // namespace divminer

#endif  // DIVMINER_PREPARE_HPP_
