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

#include "divminer/discretize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "divminer/error.hpp"
#include "logging.hpp"

namespace divminer {
namespace {

using json = nlohmann::json;

constexpr std::string_view kMissingLabel = "missing";

int fraction_digits(std::string_view text) {
  if (text.find_first_of("eE") != std::string_view::npos) return 0;
  const size_t dot = text.find('.');
  if (dot == std::string_view::npos) return 0;
  size_t end = text.size();
  while (end > dot + 1 && (text[end - 1] == ' ' || text[end - 1] == '\t')) --end;
  return static_cast<int>(end - dot - 1);
}

// Fraction digits of the shortest round-trip rendering.
int shortest_fraction_digits(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return 0;
  return fraction_digits(std::string_view(buffer, static_cast<size_t>(ptr - buffer)));
}

std::string format_edge(double value, int decimals) {
  decimals = std::max(decimals, shortest_fraction_digits(value));
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                 std::chars_format::fixed, decimals);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buffer, static_cast<size_t>(ptr - buffer));
}

ColumnStrategy strategy_from_json(const std::string& column, const json& node) {
  if (!node.is_object() || !node.contains("strategy")) {
    throw Error(ErrorCode::kParse, "column '" + column + "': expected an object with \"strategy\"");
  }
  const std::string kind = node.at("strategy").get<std::string>();
  ColumnStrategy strategy;
  if (kind == "categorical") {
    strategy = ColumnStrategy::categorical();
  } else if (kind == "quantile") {
    strategy = ColumnStrategy::quantile(node.value("bins", 3));
  } else if (kind == "edges") {
    strategy = ColumnStrategy::explicit_edges(node.at("edges").get<std::vector<double>>());
  } else if (kind == "mapping") {
    strategy = ColumnStrategy::explicit_mapping(
        node.at("mapping").get<std::map<std::string, std::string>>());
  } else if (kind == "ignore") {
    strategy = ColumnStrategy::ignore();
  } else {
    throw Error(ErrorCode::kParse, "column '" + column + "': unknown strategy '" + kind + "'");
  }
  strategy.validate(column);
  return strategy;
}

json strategy_to_json(const ColumnStrategy& strategy) {
  switch (strategy.kind) {
    case ColumnStrategy::Kind::kCategorical:
      return {{"strategy", "categorical"}};
    case ColumnStrategy::Kind::kQuantile:
      return {{"strategy", "quantile"}, {"bins", strategy.bins}};
    case ColumnStrategy::Kind::kEdges:
      return {{"strategy", "edges"}, {"edges", strategy.edges}};
    case ColumnStrategy::Kind::kMapping:
      return {{"strategy", "mapping"}, {"mapping", strategy.mapping}};
    case ColumnStrategy::Kind::kIgnore:
      return {{"strategy", "ignore"}};
  }
  return {};
}

struct MinedColumn {
  size_t column;
  ColumnStrategy strategy;
};

// Per-column encoder: maps each retained cell to a value index and produces
// the domain labels.
struct ColumnEncoding {
  std::vector<std::string> labels;
  std::vector<uint32_t> values;  // one per retained row
};

ColumnEncoding encode_categorical(const RawTable& table, size_t col,
                                  const std::vector<size_t>& rows,
                                  const std::map<std::string, std::string>* mapping) {
  const std::string& name = table.column_names[col];
  std::set<std::string> domain;
  std::set<std::string> unmapped;
  bool has_missing = false;
  for (size_t r : rows) {
    const Cell& cell = table.rows[r][col];
    if (!cell) {
      has_missing = true;
      continue;
    }
    if (mapping) {
      auto it = mapping->find(*cell);
      if (it == mapping->end()) {
        unmapped.insert(*cell);
      } else {
        domain.insert(it->second);
      }
    } else {
      domain.insert(*cell);
    }
  }
  if (!unmapped.empty()) {
    std::string list;
    for (const auto& v : unmapped) list += (list.empty() ? "" : ", ") + v;
    throw Error(ErrorCode::kInvalidArgument,
                "mapping for column '" + name + "' misses values: " + list);
  }

  ColumnEncoding encoding;
  std::map<std::string, uint32_t> index;
  for (const auto& value : domain) {
    index.emplace(value, static_cast<uint32_t>(encoding.labels.size()));
    encoding.labels.push_back(categorical_label(name, value));
  }
  const auto missing_index = static_cast<uint32_t>(encoding.labels.size());
  if (has_missing) encoding.labels.push_back(categorical_label(name, kMissingLabel));

  encoding.values.reserve(rows.size());
  for (size_t r : rows) {
    const Cell& cell = table.rows[r][col];
    if (!cell) {
      encoding.values.push_back(missing_index);
    } else {
      encoding.values.push_back(index.at(mapping ? mapping->at(*cell) : *cell));
    }
  }
  return encoding;
}

ColumnEncoding encode_intervals(const RawTable& table, size_t col,
                                const std::vector<size_t>& rows,
                                const ColumnStrategy& strategy) {
  const std::string& name = table.column_names[col];
  std::vector<std::optional<double>> numbers;
  numbers.reserve(rows.size());
  int decimals = 0;
  bool has_missing = false;
  for (size_t r : rows) {
    const Cell& cell = table.rows[r][col];
    if (!cell) {
      numbers.emplace_back();
      has_missing = true;
      continue;
    }
    auto value = parse_number(*cell);
    if (!value) {
      throw Error(ErrorCode::kParse, "column '" + name + "' is not numeric: row " +
                                         std::to_string(r + 1) + " holds '" + *cell + "'");
    }
    decimals = std::max(decimals, fraction_digits(*cell));
    numbers.push_back(value);
  }

  std::vector<double> edges;
  if (strategy.kind == ColumnStrategy::Kind::kEdges) {
    edges = strategy.edges;
  } else {
    std::vector<double> present;
    for (const auto& v : numbers) {
      if (v) present.push_back(*v);
    }
    edges = quantile_edges(present, strategy.bins);
    if (static_cast<int>(edges.size()) + 1 < strategy.bins) {
      log().warn("column '{}': {} quantile bins requested, {} after merging tied edges",
                 name, strategy.bins, edges.size() + 1);
    }
  }

  ColumnEncoding encoding;
  encoding.labels = interval_labels(name, edges, decimals);
  const auto missing_index = static_cast<uint32_t>(encoding.labels.size());
  if (has_missing) encoding.labels.push_back(categorical_label(name, kMissingLabel));
  encoding.values.reserve(rows.size());
  for (const auto& v : numbers) {
    encoding.values.push_back(v ? static_cast<uint32_t>(bin_index(edges, *v)) : missing_index);
  }
  return encoding;
}

bool column_is_numeric(const RawTable& table, size_t col) {
  bool any = false;
  for (const auto& row : table.rows) {
    const Cell& cell = row[col];
    if (!cell) continue;
    if (!parse_number(*cell)) return false;
    any = true;
  }
  return any;
}

}  // namespace

ColumnStrategy ColumnStrategy::quantile(int bins) {
  ColumnStrategy s;
  s.kind = Kind::kQuantile;
  s.bins = bins;
  return s;
}

ColumnStrategy ColumnStrategy::explicit_edges(std::vector<double> edges) {
  ColumnStrategy s;
  s.kind = Kind::kEdges;
  s.edges = std::move(edges);
  return s;
}

ColumnStrategy ColumnStrategy::explicit_mapping(std::map<std::string, std::string> mapping) {
  ColumnStrategy s;
  s.kind = Kind::kMapping;
  s.mapping = std::move(mapping);
  return s;
}

ColumnStrategy ColumnStrategy::ignore() {
  ColumnStrategy s;
  s.kind = Kind::kIgnore;
  return s;
}

void ColumnStrategy::validate(std::string_view column) const {
  const std::string prefix = "column '" + std::string(column) + "': ";
  if (kind == Kind::kQuantile && bins < 2) {
    throw Error(ErrorCode::kInvalidArgument, prefix + "quantile bins must be >= 2");
  }
  if (kind == Kind::kEdges) {
    if (edges.empty()) {
      throw Error(ErrorCode::kInvalidArgument, prefix + "edges must not be empty");
    }
    for (size_t i = 0; i < edges.size(); ++i) {
      if (!std::isfinite(edges[i]) || (i > 0 && !(edges[i - 1] < edges[i]))) {
        throw Error(ErrorCode::kInvalidArgument, prefix + "edges must be finite and strictly increasing");
      }
    }
  }
}

DiscretizationSpec DiscretizationSpec::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("discretization spec: ") + e.what());
  }
  DiscretizationSpec spec;
  try {
    if (doc.contains("missing")) {
      const std::string policy = doc.at("missing").get<std::string>();
      if (policy == "drop-row") {
        spec.missing = MissingPolicy::kDropRow;
      } else if (policy == "own-category") {
        spec.missing = MissingPolicy::kOwnCategory;
      } else {
        throw Error(ErrorCode::kParse, "unknown missing policy '" + policy + "'");
      }
    }
    if (doc.contains("numeric_default")) {
      spec.numeric_default = strategy_from_json("numeric_default", doc.at("numeric_default"));
    }
    if (doc.contains("columns")) {
      for (const auto& [column, node] : doc.at("columns").items()) {
        spec.columns.emplace(column, strategy_from_json(column, node));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("discretization spec: ") + e.what());
  }
  return spec;
}

DiscretizationSpec DiscretizationSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return from_json(text);
}

std::string DiscretizationSpec::to_json() const {
  json doc;
  doc["missing"] = missing == MissingPolicy::kDropRow ? "drop-row" : "own-category";
  doc["numeric_default"] = strategy_to_json(numeric_default);
  json cols = json::object();
  for (const auto& [name, strategy] : columns) cols[name] = strategy_to_json(strategy);
  doc["columns"] = cols;
  return doc.dump(2) + "\n";
}

std::string categorical_label(std::string_view column, std::string_view value) {
  const bool comparison = !value.empty() && (value.front() == '<' || value.front() == '>' ||
                                             value.starts_with("≤") || value.starts_with("≥"));
  std::string label(column);
  if (!comparison) label += '=';
  label += value;
  return label;
}

std::vector<std::string> interval_labels(std::string_view column,
                                         const std::vector<double>& edges, int decimals) {
  std::vector<std::string> labels;
  const std::string name(column);
  if (edges.empty()) {
    labels.push_back(name + "=all");
    return labels;
  }
  labels.push_back(name + "≤" + format_edge(edges.front(), decimals));
  for (size_t i = 1; i < edges.size(); ++i) {
    labels.push_back(name + "=(" + format_edge(edges[i - 1], decimals) + "-" +
                     format_edge(edges[i], decimals) + "]");
  }
  labels.push_back(name + ">" + format_edge(edges.back(), decimals));
  return labels;
}

size_t bin_index(const std::vector<double>& edges, double value) {
  // First edge >= value; right-closed bins.
  return static_cast<size_t>(std::lower_bound(edges.begin(), edges.end(), value) - edges.begin());
}

std::vector<double> quantile_edges(std::vector<double> values, int bins) {
  std::vector<double> edges;
  if (values.empty() || bins < 2) return edges;
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  const auto b = static_cast<size_t>(bins);
  for (size_t i = 1; i < b; ++i) {
    const size_t upper = (i * n + b - 1) / b;  // ceil(i * n / bins)
    if (upper == 0) continue;
    const double edge = values[upper - 1];
    if (edge >= values.back()) break;
    if (edges.empty() || edges.back() < edge) edges.push_back(edge);
  }
  return edges;
}

DiscretizedDataset discretize(const RawTable& table, const DiscretizationSpec& spec,
                              const std::set<std::string>& exclude) {
  for (const auto& [name, strategy] : spec.columns) {
    if (!table.find_column(name)) {
      log().warn("discretization spec names unknown column '{}'", name);
    }
  }

  std::vector<MinedColumn> mined;
  for (size_t c = 0; c < table.num_columns(); ++c) {
    const std::string& name = table.column_names[c];
    if (exclude.contains(name)) continue;
    ColumnStrategy strategy;
    if (auto it = spec.columns.find(name); it != spec.columns.end()) {
      strategy = it->second;
    } else if (column_is_numeric(table, c)) {
      strategy = spec.numeric_default;
    }
    if (strategy.kind == ColumnStrategy::Kind::kIgnore) continue;
    strategy.validate(name);
    mined.push_back({c, std::move(strategy)});
  }
  if (mined.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no columns left to mine");
  }

  std::vector<size_t> rows;
  rows.reserve(table.num_rows());
  size_t dropped = 0;
  for (size_t r = 0; r < table.num_rows(); ++r) {
    bool keep = true;
    if (spec.missing == MissingPolicy::kDropRow) {
      for (const auto& m : mined) {
        if (!table.rows[r][m.column]) {
          keep = false;
          break;
        }
      }
    }
    if (keep) {
      rows.push_back(r);
    } else {
      ++dropped;
    }
  }
  if (dropped > 0) log().info("dropped {} rows with missing values", dropped);

  auto dictionary = std::make_shared<ItemDictionary>();
  const size_t width = mined.size();
  std::vector<ItemId> cells(rows.size() * width);
  for (size_t a = 0; a < width; ++a) {
    const auto& m = mined[a];
    ColumnEncoding encoding;
    switch (m.strategy.kind) {
      case ColumnStrategy::Kind::kCategorical:
        encoding = encode_categorical(table, m.column, rows, nullptr);
        break;
      case ColumnStrategy::Kind::kMapping:
        encoding = encode_categorical(table, m.column, rows, &m.strategy.mapping);
        break;
      case ColumnStrategy::Kind::kQuantile:
      case ColumnStrategy::Kind::kEdges:
        encoding = encode_intervals(table, m.column, rows, m.strategy);
        break;
      case ColumnStrategy::Kind::kIgnore:
        break;
    }
    const ItemId first = static_cast<ItemId>(dictionary->num_items());
    dictionary->add_attribute(table.column_names[m.column], encoding.labels);
    for (size_t r = 0; r < rows.size(); ++r) {
      cells[r * width + a] = first + encoding.values[r];
    }
  }
  log().info("discretized {} rows into {} attributes, {} items", rows.size(), width,
             dictionary->num_items());
  return DiscretizedDataset(std::move(dictionary), std::move(cells), std::move(rows));
}

}  // namespace divminer
