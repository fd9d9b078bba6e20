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

#include "divminer/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "divminer/csv.hpp"
#include "divminer/error.hpp"

namespace divminer {
namespace {

using json = nlohmann::json;

constexpr int kFormatVersion = 1;

json real_or_null(double value) {
  if (std::isnan(value)) return nullptr;
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

double real_from(const json& node) {
  if (node.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (node.is_string()) {
    const auto s = node.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::kParse, "unexpected number '" + s + "'");
  }
  return node.get<double>();
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string md_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

void render_block(std::ostringstream& out, const MiningResult& result, size_t k, Sign sign) {
  const char* title = sign == Sign::kPositive   ? "Highest divergence"
                      : sign == Sign::kNegative ? "Lowest divergence"
                                                : "Largest absolute divergence";
  out << "## " << title << "\n\n";
  out << "| Itemset | Sup | Δ | t |\n";
  out << "|:--|--:|--:|--:|\n";
  for (const ItemsetRecord* record : top_k_records(result, k, sign)) {
    out << "| " << md_escape(itemset_label(result.dictionary(), record->itemset)) << " | "
        << format_fixed4(record->support) << " | " << format_fixed4(record->divergence) << " | "
        << format_fixed4(record->t_value) << " |\n";
  }
  out << "\n";
}

}  // namespace

std::string format_fixed4(double value) {
  if (std::isnan(value)) return "—";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.4f", value);
  std::string text = buffer;
  if (text == "-0.0000") text = "0.0000";
  return text;
}

std::string format_fixed4(const std::optional<double>& value) {
  return value ? format_fixed4(*value) : "—";
}

void write_itemsets_csv(const MiningResult& result, std::ostream& out) {
  out << "itemset,support,count,outcome,divergence,t\n";
  for (const auto& record : result.records()) {
    out << csv_escape(itemset_label(result.dictionary(), record.itemset)) << ','
        << format_fixed4(record.support) << ',' << record.match_count << ','
        << format_fixed4(record.outcome_mean) << ',' << format_fixed4(record.divergence) << ','
        << format_fixed4(record.t_value) << '\n';
  }
}

std::string result_to_json(const MiningResult& result) {
  const auto& meta = result.metadata();
  const ItemDictionary& dictionary = result.dictionary();
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["metadata"] = {{"threshold", meta.threshold},
                     {"outcome", meta.outcome},
                     {"n_rows", meta.n_rows},
                     {"dataset_hash", meta.dataset_hash},
                     {"baseline", std::string(to_string(meta.baseline))},
                     {"n_itemsets", result.records().size()},
                     {"global_outcome", real_or_null(result.global().outcome_mean)}};
  json attributes = json::array();
  for (const Attribute& attribute : dictionary.attributes()) {
    json labels = json::array();
    for (uint32_t v = 0; v < attribute.domain_size; ++v) {
      labels.push_back(dictionary.item(attribute.first_item + v).label);
    }
    attributes.push_back({{"name", attribute.name}, {"items", labels}});
  }
  doc["attributes"] = attributes;
  json records = json::array();
  for (const auto& record : result.records()) {
    json items = json::array();
    for (ItemId id : record.itemset.items()) items.push_back(dictionary.item(id).label);
    records.push_back({{"itemset", items},
                       {"support", record.support},
                       {"count", record.match_count},
                       {"outcome_count", record.outcome_count},
                       {"outcome_sum", record.outcome_sum},
                       {"outcome_sum_sq", record.outcome_sum_sq},
                       {"outcome", real_or_null(record.outcome_mean)},
                       {"divergence", real_or_null(record.divergence)},
                       {"t", record.t_value ? real_or_null(*record.t_value) : json(nullptr)}});
  }
  doc["records"] = records;
  return doc.dump(1) + "\n";
}

MiningResult result_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format_version", 0) != kFormatVersion) {
      throw Error(ErrorCode::kParse, "unsupported result format version");
    }
    auto dictionary = std::make_shared<ItemDictionary>();
    for (const auto& attribute : doc.at("attributes")) {
      dictionary->add_attribute(attribute.at("name").get<std::string>(),
                                attribute.at("items").get<std::vector<std::string>>());
    }
    const auto& m = doc.at("metadata");
    MiningMetadata meta;
    meta.threshold = m.at("threshold").get<double>();
    meta.outcome = m.at("outcome").get<std::string>();
    meta.n_rows = m.at("n_rows").get<uint64_t>();
    meta.dataset_hash = m.at("dataset_hash").get<std::string>();
    meta.baseline = m.at("baseline").get<std::string>() == "complement" ? Baseline::kComplement
                                                                         : Baseline::kGlobal;
    std::vector<ItemsetRecord> records;
    records.reserve(doc.at("records").size());
    for (const auto& node : doc.at("records")) {
      ItemsetRecord record;
      std::vector<ItemId> ids;
      for (const auto& label : node.at("itemset")) {
        auto id = dictionary->find_label(label.get<std::string>());
        if (!id) throw Error(ErrorCode::kParse, "unknown item '" + label.get<std::string>() + "'");
        ids.push_back(*id);
      }
      record.itemset = make_itemset(*dictionary, std::move(ids));
      record.support = node.at("support").get<double>();
      record.match_count = node.at("count").get<uint64_t>();
      record.outcome_count = node.at("outcome_count").get<uint64_t>();
      record.outcome_sum = node.at("outcome_sum").get<double>();
      record.outcome_sum_sq = node.at("outcome_sum_sq").get<double>();
      record.outcome_mean = real_from(node.at("outcome"));
      record.divergence = real_from(node.at("divergence"));
      if (!node.at("t").is_null()) record.t_value = real_from(node.at("t"));
      records.push_back(std::move(record));
    }
    return MiningResult(std::move(dictionary), std::move(records), std::move(meta));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("result JSON: ") + e.what());
  }
}

MiningResult load_result_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return result_from_json(text);
}

std::string render_top_markdown(const MiningResult& result, size_t k, std::optional<Sign> sign) {
  const auto& meta = result.metadata();
  std::ostringstream out;
  out << "# Divergent itemsets\n\n";
  out << "- Outcome: `" << meta.outcome << "`\n";
  out << "- Support threshold: " << meta.threshold << "\n";
  out << "- Rows: " << meta.n_rows << "\n";
  out << "- Itemsets: " << result.records().size() << "\n";
  out << "- Global outcome: " << format_fixed4(result.global().outcome_mean) << "\n";
  out << "- t baseline: " << to_string(meta.baseline) << "\n\n";
  if (sign) {
    render_block(out, result, k, *sign);
  } else {
    render_block(out, result, k, Sign::kPositive);
    render_block(out, result, k, Sign::kNegative);
  }
  return out.str();
}

std::string attribution_to_json(const ItemDictionary& dictionary,
                                const ShapleyAttribution& attribution) {
  json items = json::array();
  json contributions = json::array();
  for (const auto& [id, value] : attribution.contributions) {
    items.push_back(dictionary.item(id).label);
    contributions.push_back({{"item", dictionary.item(id).label}, {"contribution", value}});
  }
  json doc = {{"itemset", items},
              {"divergence", real_or_null(attribution.divergence)},
              {"residual_check", attribution.residual},
              {"contributions", contributions}};
  return doc.dump(2) + "\n";
}

std::string render_attribution_svg(const ItemDictionary& dictionary,
                                   const ShapleyAttribution& attribution) {
  auto bars = attribution.contributions;
  std::stable_sort(bars.begin(), bars.end(), [](const auto& a, const auto& b) {
    return std::abs(a.second) > std::abs(b.second);
  });

  constexpr double kWidth = 720.0;
  constexpr double kLabelWidth = 240.0;
  constexpr double kValueMargin = 70.0;
  constexpr double kBarHeight = 24.0;
  constexpr double kGap = 10.0;
  constexpr double kTop = 48.0;
  const double plot_left = kLabelWidth + kValueMargin;
  const double plot_width = kWidth - plot_left - kValueMargin;

  double lo = 0.0;
  double hi = 0.0;
  for (const auto& [id, value] : bars) {
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  if (hi - lo <= 0.0) hi = lo + 1.0;
  auto x_of = [&](double v) { return plot_left + (v - lo) / (hi - lo) * plot_width; };
  const double zero_x = x_of(0.0);
  const double height = kTop + static_cast<double>(bars.size()) * (kBarHeight + kGap) + 24.0;

  std::ostringstream svg;
  svg.setf(std::ios::fixed);
  svg.precision(1);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << kWidth << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "  <text x=\"12\" y=\"22\" font-size=\"14\" font-weight=\"bold\">"
      << xml_escape(itemset_label(dictionary, attribution.itemset)) << "</text>\n";
  svg << "  <text x=\"12\" y=\"38\" fill=\"#555\">divergence " << xml_escape(format_fixed4(attribution.divergence))
      << "</text>\n";
  double y = kTop;
  for (const auto& [id, value] : bars) {
    const double x0 = std::min(zero_x, x_of(value));
    const double w = std::abs(x_of(value) - zero_x);
    const char* fill = value >= 0 ? "#d1495b" : "#2e86ab";
    svg << "  <text x=\"" << kLabelWidth << "\" y=\"" << y + kBarHeight * 0.68
        << "\" text-anchor=\"end\">" << xml_escape(dictionary.item(id).label) << "</text>\n";
    svg << "  <rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << kBarHeight
        << "\" fill=\"" << fill << "\"/>\n";
    const bool right = value >= 0;
    svg << "  <text x=\"" << (right ? x0 + w + 4 : x0 - 4) << "\" y=\"" << y + kBarHeight * 0.68
        << "\" text-anchor=\"" << (right ? "start" : "end") << "\">"
        << xml_escape(format_fixed4(value)) << "</text>\n";
    y += kBarHeight + kGap;
  }
  svg << "  <line x1=\"" << zero_x << "\" y1=\"" << kTop - 4 << "\" x2=\"" << zero_x << "\" y2=\"" << y
      << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace divminer
