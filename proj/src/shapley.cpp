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

#include "divminer/shapley.hpp"

#include <charconv>
#include <cmath>

#include "divminer/error.hpp"

namespace divminer {
namespace {

constexpr size_t kMaxWidth = 30;

Itemset subset_of(std::span<const ItemId> items, uint32_t mask) {
  std::vector<ItemId> chosen;
  for (size_t i = 0; i < items.size(); ++i) {
    if (mask & (1u << i)) chosen.push_back(items[i]);
  }
  return Itemset(std::move(chosen));
}

}  // namespace

ShapleyAttribution shapley(const Itemset& itemset, const MiningResult& result) {
  const size_t m = itemset.size();
  if (m > kMaxWidth) {
    throw Error(ErrorCode::kInvalidArgument, "itemset too wide for exact attribution");
  }
  const auto items = itemset.items();
  const uint32_t full = m == 0 ? 0 : static_cast<uint32_t>((uint64_t{1} << m) - 1);

  // Divergence of every subset, indexed by bitmask over the itemset's items.
  std::vector<double> value(size_t{1} << m, 0.0);
  for (uint32_t mask = 1; mask <= full && full != 0; ++mask) {
    const Itemset subset = subset_of(items, mask);
    const ItemsetRecord* record = result.find(subset);
    if (record == nullptr) {
      throw Error(ErrorCode::kMissingSubset,
                  "subset '" + itemset_label(result.dictionary(), subset) +
                      "' of '" + itemset_label(result.dictionary(), itemset) +
                      "' is not in the mining result");
    }
    value[mask] = record->divergence;
    if (mask == full) break;
  }

  // weight[j] = j! (m - j - 1)! / m!
  std::vector<double> weight(m, 0.0);
  for (size_t j = 0; j < m; ++j) {
    double w = 1.0 / static_cast<double>(m);
    // 1/m * 1/C(m-1, j)
    for (size_t i = 1; i <= j; ++i) {
      w *= static_cast<double>(i) / static_cast<double>(m - 1 - j + i);
    }
    weight[j] = w;
  }

  ShapleyAttribution attribution;
  attribution.itemset = itemset;
  attribution.divergence = m == 0 ? 0.0 : value[full];
  double total = 0.0;
  for (size_t a = 0; a < m; ++a) {
    const uint32_t bit = 1u << a;
    double contribution = 0.0;
    for (uint32_t mask = 0; mask <= full; ++mask) {
      if (mask & bit) continue;
      const size_t j = static_cast<size_t>(std::popcount(mask));
      contribution += weight[j] * (value[mask | bit] - value[mask]);
      if (mask == full) break;
    }
    attribution.contributions.emplace_back(items[a], contribution);
    total += contribution;
  }
  attribution.residual = std::abs(total - attribution.divergence);
  return attribution;
}

ShapleySelection parse_shapley_selection(const ItemDictionary& dictionary, std::string_view text) {
  if (text.starts_with("itemset:")) {
    return parse_itemset(dictionary, text.substr(8));
  }
  if (text.starts_with("top")) {
    const std::string_view rest = text.substr(3);
    const size_t dash = rest.find('-');
    if (dash != std::string_view::npos) {
      size_t k = 0;
      const std::string_view digits = rest.substr(0, dash);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
      auto sign = parse_sign(rest.substr(dash + 1));
      if (ec == std::errc() && ptr == digits.data() + digits.size() && sign) {
        return TopSelection{k, *sign};
      }
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "shapley selection '" + std::string(text) +
                  "': expected top<k>-<positive|negative|absolute> or itemset:<items>");
}

std::vector<ShapleyAttribution> shapley_batch(const MiningResult& result,
                                              const ShapleySelection& selection) {
  std::vector<ShapleyAttribution> out;
  if (const auto* explicit_itemset = std::get_if<Itemset>(&selection)) {
    out.push_back(shapley(*explicit_itemset, result));
    return out;
  }
  const auto& top = std::get<TopSelection>(selection);
  for (const ItemsetRecord* record : top_k_records(result, top.k, top.sign)) {
    out.push_back(shapley(record->itemset, result));
  }
  return out;
}

}  // namespace divminer
