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

#ifndef DIVMINER_OUTCOME_HPP_
#define DIVMINER_OUTCOME_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "divminer/csv.hpp"

namespace divminer {

// Per-instance outcome; nullopt is the do-not-consider value.
using OutcomeValue = std::optional<double>;

// Outcome values for every row plus the global aggregates over the
// non-excluded entries.
class OutcomeVector {
 public:
  OutcomeVector() = default;
  explicit OutcomeVector(std::vector<OutcomeValue> values);

  const std::vector<OutcomeValue>& values() const { return values_; }
  size_t size() const { return values_.size(); }

  uint64_t global_count() const { return count_; }
  double global_sum() const { return sum_; }
  double global_sum_sq() const { return sum_sq_; }
  // Mean over non-excluded entries; NaN when there are none.
  double global_mean() const;

  // Reference value subtracted before accumulation (first defined value, or
  // 0). Accumulating shifted values keeps constant outcomes exactly constant.
  double shift() const { return shift_; }

  // Restricts to the given row indices, in order.
  OutcomeVector select(std::span<const size_t> rows) const;

 private:
  std::vector<OutcomeValue> values_;
  uint64_t count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  double shift_ = 0.0;
};

enum class ConfusionKind { kFpr, kFnr, kTpr, kTnr, kError, kAccuracy };

std::string_view to_string(ConfusionKind kind);

// Rank valuation: the benefit of holding rank i (1 = top).
struct TopK {
  uint64_t k = 1;
};
// i^exponent with exponent < 0.
struct PowerLaw {
  double exponent = -0.1;
};
// (N - i) / N; N = 0 means "number of ranked instances".
struct LinearDecay {
  uint64_t population = 0;
};
// values[i - 1] for i <= values.size(), fallback beyond.
struct RankTable {
  std::vector<double> values;
  double fallback = 0.0;
};

class RankValuation {
 public:
  using Kind = std::variant<TopK, PowerLaw, LinearDecay, RankTable>;

  // Throws Error(kInvalidArgument) for k = 0, a non-negative exponent or a
  // table that increases with rank.
  explicit RankValuation(Kind kind);

  const Kind& kind() const { return kind_; }
  double operator()(uint64_t rank, uint64_t population) const;
  std::string describe() const;

 private:
  Kind kind_;
};

// o(x) = column value; missing cells are excluded.
OutcomeVector attribute_outcome(std::span<const std::optional<double>> column);

// Classifier error statistics encoded as masked 0/1 outcomes. FPR excludes
// actual positives and scores false positives as 1; FNR mirrors it; TPR and
// TNR are the complements on the same masks; ERROR/ACCURACY never exclude.
OutcomeVector confusion_outcome(std::span<const bool> truth, std::span<const bool> prediction,
                                ConfusionKind kind);

// o(x) = valuation(rank(x)); ranks must be a permutation of 1..N.
OutcomeVector rank_outcome(std::span<const uint64_t> ranks, const RankValuation& valuation);

enum class RankDirection { kDescending, kAscending };

// Rank 1 goes to the best score; ties keep input order.
std::vector<uint64_t> ranks_from_score(std::span<const std::optional<double>> scores,
                                       RankDirection direction);

// Parsed form of the outcome grammar:
//   attribute:COL
//   fpr|fnr|tpr|tnr|error|accuracy:TRUTH:PRED
//   rank:COL:VALUATION            (COL holds ranks)
//   rank:COL:desc|asc:VALUATION   (COL holds scores)
// with VALUATION one of topk=K, power=A, linear[=N], table=v1|v2|...[:default=D].
// power=A means i^(-|A|).
struct OutcomeSpec {
  enum class Mode { kAttribute, kConfusion, kRank };

  Mode mode = Mode::kAttribute;
  std::string column;  // attribute, rank or score column
  std::string truth_column;
  std::string prediction_column;
  ConfusionKind confusion = ConfusionKind::kFpr;
  std::optional<RankDirection> score_direction;
  RankValuation valuation{PowerLaw{}};
  std::string text;

  static OutcomeSpec parse(std::string_view text);
  std::vector<std::string> source_columns() const;
};

// Boolean cell parse: 1/0, true/false, yes/no, t/f, y/n (case-insensitive).
std::optional<bool> parse_bool(std::string_view text);

// Evaluates the outcome over the given rows of the table, in that order.
// Ranks derived from scores are computed among those rows only. Throws
// Error(kUndefinedOutcome) when every value is excluded.
OutcomeVector build_outcome(const RawTable& table, const OutcomeSpec& spec,
                            std::span<const size_t> rows);
OutcomeVector build_outcome(const RawTable& table, const OutcomeSpec& spec);

}  // namespace divminer

#endif  // DIVMINER_OUTCOME_HPP_
