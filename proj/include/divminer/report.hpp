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

#ifndef DIVMINER_REPORT_HPP_
#define DIVMINER_REPORT_HPP_

#include <iosfwd>
#include <optional>
#include <string>

#include "divminer/miner.hpp"
#include "divminer/shapley.hpp"

namespace divminer {

// Fixed 4-decimal rendering; NaN and undefined values render as "—".
std::string format_fixed4(double value);
std::string format_fixed4(const std::optional<double>& value);

// Columns: itemset, support, count, outcome, divergence, t.
void write_itemsets_csv(const MiningResult& result, std::ostream& out);

// Full-precision JSON with run metadata, the item dictionary and every
// record. result_from_json() inverts it.
std::string result_to_json(const MiningResult& result);
MiningResult result_from_json(std::string_view text);
MiningResult load_result_json(const std::string& path);

// Markdown table(s) of the k most divergent itemsets (Sup, Δ, t columns).
// Without a sign, renders a positive and a negative block.
std::string render_top_markdown(const MiningResult& result, size_t k, std::optional<Sign> sign);

std::string attribution_to_json(const ItemDictionary& dictionary,
                                 const ShapleyAttribution& attribution);

// Horizontal bar chart, one bar per item, largest magnitude first; negative
// contributions extend left of the zero axis.
std::string render_attribution_svg(const ItemDictionary& dictionary,
                                   const ShapleyAttribution& attribution);

// Writes text to a file, throwing Error(kIo) on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace divminer

#endif  // DIVMINER_REPORT_HPP_
