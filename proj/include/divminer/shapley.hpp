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

#ifndef DIVMINER_SHAPLEY_HPP_
#define DIVMINER_SHAPLEY_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "divminer/dataset.hpp"
#include "divminer/miner.hpp"

namespace divminer {

// Split of an itemset's divergence among its items.
struct ShapleyAttribution {
  Itemset itemset;
  std::vector<std::pair<ItemId, double>> contributions;  // in itemset order
  double divergence = 0.0;
  double residual = 0.0;  // |sum of contributions - divergence|
};

// Exact Shapley values of the game v(J) = divergence(J), v(empty) = 0:
//
//   contribution(a) = sum over J in I \ {a} of
//                     |J|! (|I| - |J| - 1)! / |I|! * (v(J + a) - v(J))
//
// Every subset of the itemset must be in the result. Throws
// Error(kMissingSubset) naming the first absent subset, and
// Error(kInvalidArgument) for itemsets wider than 30 items.
ShapleyAttribution shapley(const Itemset& itemset, const MiningResult& result);

// Which itemsets to attribute: the top k by a sign, or one explicit itemset.
struct TopSelection {
  size_t k = 1;
  Sign sign = Sign::kPositive;
};
using ShapleySelection = std::variant<TopSelection, Itemset>;

// Parses "top<k>-<positive|negative|absolute>" (pos/neg/abs accepted) or
// "itemset:<label>, <label>, ...".
ShapleySelection parse_shapley_selection(const ItemDictionary& dictionary, std::string_view text);

// One attribution per selected itemset; k is clamped to the result size.
std::vector<ShapleyAttribution> shapley_batch(const MiningResult& result,
                                              const ShapleySelection& selection);

}  // namespace divminer

#endif  // DIVMINER_SHAPLEY_HPP_
