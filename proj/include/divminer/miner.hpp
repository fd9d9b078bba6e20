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

#ifndef DIVMINER_MINER_HPP_
#define DIVMINER_MINER_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "divminer/dataset.hpp"
#include "divminer/outcome.hpp"
#include "divminer/stats.hpp"

namespace divminer {

// What a subgroup's Welch statistic is compared against.
enum class Baseline { kGlobal, kComplement };

std::string_view to_string(Baseline baseline);

// Statistics of one mined itemset.
struct ItemsetRecord {
  Itemset itemset;
  double support = 0.0;         // match_count / n_rows
  uint64_t match_count = 0;     // rows matching, excluded outcomes included
  uint64_t outcome_count = 0;   // matching rows with a defined outcome
  double outcome_sum = 0.0;
  double outcome_sum_sq = 0.0;
  double outcome_mean = 0.0;    // NaN when outcome_count == 0
  double divergence = 0.0;      // outcome_mean - global mean; NaN likewise
  std::optional<double> t_value;  // nullopt: undefined
};

struct MiningMetadata {
  double threshold = 0.0;
  std::string outcome;
  uint64_t n_rows = 0;
  std::string dataset_hash;
  Baseline baseline = Baseline::kGlobal;
};

// Every itemset at or above the support threshold, in canonical order
// (shorter first, then by item id). records().front() is the empty itemset.
class MiningResult {
 public:
  MiningResult(std::shared_ptr<const ItemDictionary> dictionary,
               std::vector<ItemsetRecord> records, MiningMetadata metadata);

  const ItemDictionary& dictionary() const { return *dictionary_; }
  std::shared_ptr<const ItemDictionary> shared_dictionary() const { return dictionary_; }
  const std::vector<ItemsetRecord>& records() const { return records_; }
  const ItemsetRecord& global() const { return records_.front(); }
  const MiningMetadata& metadata() const { return metadata_; }

  const ItemsetRecord* find(const Itemset& itemset) const;
  std::optional<size_t> index_of(const Itemset& itemset) const;

 private:
  std::shared_ptr<const ItemDictionary> dictionary_;
  std::vector<ItemsetRecord> records_;
  MiningMetadata metadata_;
  std::unordered_map<Itemset, size_t, ItemsetHash> index_;
};

struct MineOptions {
  double threshold = 0.01;  // support threshold s in (0, 1]
  unsigned threads = 1;     // 0 = hardware concurrency
  uint64_t max_records = 5'000'000;
  Baseline baseline = Baseline::kGlobal;
  std::string outcome_description;
};

// Smallest match count c with c / n_rows >= threshold.
uint64_t min_match_count(double threshold, uint64_t n_rows);

// Turns raw accumulators into a record. `global` and `group` hold outcome
// moments shifted by `shift`.
ItemsetRecord make_record(Itemset itemset, uint64_t matches, const Moments& group,
                          const Moments& global, double shift, uint64_t n_rows,
                          Baseline baseline);

// Enumerates every itemset with support >= threshold by frequent-pattern
// growth, carrying match counts and outcome moments through the prefix tree
// and its conditional projections. Top-level items are distributed across
// worker threads; the result is canonically ordered, so thread count does
// not affect it.
//
// Throws Error(kInvalidArgument) for a threshold outside (0, 1] or an outcome
// of the wrong length, Error(kUndefinedOutcome) when no outcome is defined,
// and Error(kRecordCap) when more than max_records itemsets qualify.
MiningResult mine(const DiscretizedDataset& dataset, const OutcomeVector& outcome,
                  const MineOptions& options);

enum class Sign { kPositive, kNegative, kAbsolute };

std::string_view to_string(Sign sign);
std::optional<Sign> parse_sign(std::string_view text);

// The k most divergent non-empty itemsets. Ties: higher support first, then
// canonical order. Itemsets with undefined divergence are skipped.
std::vector<const ItemsetRecord*> top_k_records(const MiningResult& result, size_t k, Sign sign);

}  // namespace divminer

#endif  // DIVMINER_MINER_HPP_
