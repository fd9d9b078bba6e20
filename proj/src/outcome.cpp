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

#include "divminer/outcome.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "divminer/error.hpp"
#include "logging.hpp"

namespace divminer {
namespace {

std::vector<std::string_view> split(std::string_view text, char separator) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    const size_t end = text.find(separator, start);
    parts.push_back(text.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

double parse_real(std::string_view text, std::string_view what) {
  auto value = parse_number(text);
  if (!value) {
    throw Error(ErrorCode::kInvalidArgument,
                "outcome spec: " + std::string(what) + " '" + std::string(text) + "' is not a number");
  }
  return *value;
}

uint64_t parse_count(std::string_view text, std::string_view what) {
  const double value = parse_real(text, what);
  if (value < 1 || value != std::floor(value)) {
    throw Error(ErrorCode::kInvalidArgument,
                "outcome spec: " + std::string(what) + " must be a positive integer");
  }
  return static_cast<uint64_t>(value);
}

RankValuation parse_valuation(std::span<const std::string_view> parts) {
  if (parts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "outcome spec: missing rank valuation");
  }
  const std::string_view head = parts[0];
  const size_t eq = head.find('=');
  const std::string_view name = head.substr(0, eq);
  const std::string_view arg = eq == std::string_view::npos ? std::string_view{} : head.substr(eq + 1);
  auto no_extra = [&](size_t allowed) {
    if (parts.size() > allowed) {
      throw Error(ErrorCode::kInvalidArgument,
                  "outcome spec: unexpected '" + std::string(parts[allowed]) + "'");
    }
  };
  if (name == "topk") {
    no_extra(1);
    return RankValuation(TopK{parse_count(arg, "topk")});
  }
  if (name == "power") {
    no_extra(1);
    const double rate = parse_real(arg, "power");
    return RankValuation(PowerLaw{-std::abs(rate)});
  }
  if (name == "linear") {
    no_extra(1);
    return RankValuation(LinearDecay{arg.empty() ? 0 : parse_count(arg, "linear")});
  }
  if (name == "table") {
    RankTable table;
    for (auto v : split(arg, '|')) table.values.push_back(parse_real(v, "table value"));
    if (parts.size() > 1) {
      no_extra(2);
      if (!parts[1].starts_with("default=")) {
        throw Error(ErrorCode::kInvalidArgument,
                    "outcome spec: expected default=D after table, got '" + std::string(parts[1]) + "'");
      }
      table.fallback = parse_real(parts[1].substr(8), "default");
    }
    return RankValuation(std::move(table));
  }
  throw Error(ErrorCode::kInvalidArgument,
              "outcome spec: unknown rank valuation '" + std::string(head) + "'");
}

std::vector<bool> bool_column(const RawTable& table, const std::string& name,
                              std::span<const size_t> rows) {
  const size_t col = table.column_index(name);
  std::vector<bool> out;
  out.reserve(rows.size());
  for (size_t r : rows) {
    const Cell& cell = table.rows[r][col];
    auto value = cell ? parse_bool(*cell) : std::nullopt;
    if (!value) {
      throw Error(ErrorCode::kParse, "column '" + name + "' row " + std::to_string(r + 1) +
                                         ": expected a boolean, found '" +
                                         (cell ? *cell : std::string("<missing>")) + "'");
    }
    out.push_back(*value);
  }
  return out;
}

std::vector<std::optional<double>> numeric_rows(const RawTable& table, const std::string& name,
                                                std::span<const size_t> rows) {
  const auto full = table.numeric_column(name);
  std::vector<std::optional<double>> out;
  out.reserve(rows.size());
  for (size_t r : rows) out.push_back(full.at(r));
  return out;
}

}  // namespace

OutcomeVector::OutcomeVector(std::vector<OutcomeValue> values) : values_(std::move(values)) {
  bool have_shift = false;
  for (const auto& v : values_) {
    if (!v) continue;
    if (!have_shift) {
      shift_ = *v;
      have_shift = true;
    }
    ++count_;
    sum_ += *v;
    sum_sq_ += *v * *v;
  }
}

double OutcomeVector::global_mean() const {
  if (count_ == 0) return std::nan("");
  return sum_ / static_cast<double>(count_);
}

OutcomeVector OutcomeVector::select(std::span<const size_t> rows) const {
  std::vector<OutcomeValue> out;
  out.reserve(rows.size());
  for (size_t r : rows) out.push_back(values_.at(r));
  return OutcomeVector(std::move(out));
}

std::string_view to_string(ConfusionKind kind) {
  switch (kind) {
    case ConfusionKind::kFpr: return "fpr";
    case ConfusionKind::kFnr: return "fnr";
    case ConfusionKind::kTpr: return "tpr";
    case ConfusionKind::kTnr: return "tnr";
    case ConfusionKind::kError: return "error";
    case ConfusionKind::kAccuracy: return "accuracy";
  }
  return "?";
}

RankValuation::RankValuation(Kind kind) : kind_(std::move(kind)) {
  if (const auto* top = std::get_if<TopK>(&kind_); top && top->k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "top-k valuation needs k >= 1");
  }
  if (const auto* power = std::get_if<PowerLaw>(&kind_);
      power && !(power->exponent < 0 && std::isfinite(power->exponent))) {
    throw Error(ErrorCode::kInvalidArgument, "power valuation needs a negative exponent");
  }
  if (const auto* table = std::get_if<RankTable>(&kind_)) {
    if (table->values.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "table valuation needs at least one value");
    }
    for (size_t i = 1; i < table->values.size(); ++i) {
      if (table->values[i] > table->values[i - 1]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "table valuation must be non-increasing in rank (rank " +
                        std::to_string(i + 1) + ")");
      }
    }
    if (table->fallback > table->values.back()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "table valuation default exceeds the last tabulated value");
    }
  }
}

double RankValuation::operator()(uint64_t rank, uint64_t population) const {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TopK>) {
          return rank <= v.k ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return std::pow(static_cast<double>(rank), v.exponent);
        } else if constexpr (std::is_same_v<T, LinearDecay>) {
          const double n = static_cast<double>(v.population ? v.population : population);
          return (n - static_cast<double>(rank)) / n;
        } else {
          return rank <= v.values.size() ? v.values[rank - 1] : v.fallback;
        }
      },
      kind_);
}

std::string RankValuation::describe() const {
  std::ostringstream out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TopK>) {
          out << "topk=" << v.k;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          out << "power=" << -v.exponent;
        } else if constexpr (std::is_same_v<T, LinearDecay>) {
          out << "linear";
          if (v.population) out << '=' << v.population;
        } else {
          out << "table=";
          for (size_t i = 0; i < v.values.size(); ++i) out << (i ? "|" : "") << v.values[i];
          out << ":default=" << v.fallback;
        }
      },
      kind_);
  return out.str();
}

OutcomeVector attribute_outcome(std::span<const std::optional<double>> column) {
  OutcomeVector outcome(std::vector<OutcomeValue>(column.begin(), column.end()));
  if (outcome.global_count() == 0) {
    throw Error(ErrorCode::kUndefinedOutcome, "attribute outcome has no defined values");
  }
  return outcome;
}

OutcomeVector confusion_outcome(std::span<const bool> truth, std::span<const bool> prediction,
                                ConfusionKind kind) {
  if (truth.size() != prediction.size()) {
    throw Error(ErrorCode::kInvalidArgument, "truth and prediction lengths differ");
  }
  std::vector<OutcomeValue> values;
  values.reserve(truth.size());
  for (size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i];
    const bool p = prediction[i];
    switch (kind) {
      case ConfusionKind::kFpr:
        values.push_back(t ? OutcomeValue{} : OutcomeValue{p ? 1.0 : 0.0});
        break;
      case ConfusionKind::kTnr:
        values.push_back(t ? OutcomeValue{} : OutcomeValue{p ? 0.0 : 1.0});
        break;
      case ConfusionKind::kFnr:
        values.push_back(t ? OutcomeValue{p ? 0.0 : 1.0} : OutcomeValue{});
        break;
      case ConfusionKind::kTpr:
        values.push_back(t ? OutcomeValue{p ? 1.0 : 0.0} : OutcomeValue{});
        break;
      case ConfusionKind::kError:
        values.push_back(p != t ? 1.0 : 0.0);
        break;
      case ConfusionKind::kAccuracy:
        values.push_back(p == t ? 1.0 : 0.0);
        break;
    }
  }
  OutcomeVector outcome(std::move(values));
  if (outcome.global_count() == 0) {
    throw Error(ErrorCode::kUndefinedOutcome,
                std::string(to_string(kind)) + " is undefined: every row is excluded (no " +
                    (kind == ConfusionKind::kFpr || kind == ConfusionKind::kTnr ? "negatives"
                                                                                 : "positives") +
                    ")");
  }
  return outcome;
}

OutcomeVector rank_outcome(std::span<const uint64_t> ranks, const RankValuation& valuation) {
  const uint64_t n = ranks.size();
  std::vector<bool> seen(n + 1, false);
  std::vector<OutcomeValue> values;
  values.reserve(ranks.size());
  for (size_t i = 0; i < ranks.size(); ++i) {
    const uint64_t rank = ranks[i];
    if (rank == 0 || rank > n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "rank " + std::to_string(rank) + " at row " + std::to_string(i + 1) +
                      " is outside 1.." + std::to_string(n));
    }
    if (seen[rank]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate rank " + std::to_string(rank) + " at row " + std::to_string(i + 1));
    }
    seen[rank] = true;
    values.push_back(valuation(rank, n));
  }
  OutcomeVector outcome(std::move(values));
  if (outcome.global_count() == 0) {
    throw Error(ErrorCode::kUndefinedOutcome, "rank outcome over an empty population");
  }
  return outcome;
}

std::vector<uint64_t> ranks_from_score(std::span<const std::optional<double>> scores,
                                       RankDirection direction) {
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!scores[i]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "score missing at row " + std::to_string(i + 1));
    }
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return direction == RankDirection::kDescending ? *scores[a] > *scores[b]
                                                   : *scores[a] < *scores[b];
  });
  std::vector<uint64_t> ranks(scores.size());
  size_t ties = 0;
  for (size_t pos = 0; pos < order.size(); ++pos) {
    ranks[order[pos]] = pos + 1;
    if (pos > 0 && *scores[order[pos]] == *scores[order[pos - 1]]) ++ties;
  }
  if (ties > 0) log().info("{} tied scores ranked by input order", ties);
  return ranks;
}

std::optional<bool> parse_bool(std::string_view text) {
  std::string lower;
  for (char c : text) {
    if (c != ' ' && c != '\t') lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "1" || lower == "true" || lower == "yes" || lower == "t" || lower == "y") return true;
  if (lower == "0" || lower == "false" || lower == "no" || lower == "f" || lower == "n") return false;
  if (auto number = parse_number(lower)) {
    if (*number == 1.0) return true;
    if (*number == 0.0) return false;
  }
  return std::nullopt;
}

OutcomeSpec OutcomeSpec::parse(std::string_view text) {
  OutcomeSpec spec;
  spec.text = std::string(text);
  const auto parts = split(text, ':');
  const std::string_view mode = parts[0];
  auto need = [&](size_t count) {
    for (size_t i = 1; i < count; ++i) {
      if (parts.size() <= i || parts[i].empty()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "outcome spec '" + std::string(text) + "': missing field " + std::to_string(i));
      }
    }
  };

  if (mode == "attribute") {
    need(2);
    if (parts.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument, "outcome spec '" + std::string(text) + "': expected attribute:COL");
    }
    spec.mode = Mode::kAttribute;
    spec.column = std::string(parts[1]);
    return spec;
  }

  static constexpr std::pair<std::string_view, ConfusionKind> kKinds[] = {
      {"fpr", ConfusionKind::kFpr},   {"fnr", ConfusionKind::kFnr},
      {"tpr", ConfusionKind::kTpr},   {"tnr", ConfusionKind::kTnr},
      {"error", ConfusionKind::kError}, {"accuracy", ConfusionKind::kAccuracy}};
  for (const auto& [name, kind] : kKinds) {
    if (mode != name) continue;
    need(3);
    if (parts.size() != 3) {
      throw Error(ErrorCode::kInvalidArgument,
                  "outcome spec '" + std::string(text) + "': expected " + std::string(name) + ":TRUTH:PRED");
    }
    spec.mode = Mode::kConfusion;
    spec.confusion = kind;
    spec.truth_column = std::string(parts[1]);
    spec.prediction_column = std::string(parts[2]);
    return spec;
  }

  if (mode == "rank") {
    need(3);
    spec.mode = Mode::kRank;
    spec.column = std::string(parts[1]);
    size_t next = 2;
    if (parts[2] == "desc" || parts[2] == "asc") {
      spec.score_direction = parts[2] == "desc" ? RankDirection::kDescending : RankDirection::kAscending;
      next = 3;
    }
    spec.valuation = parse_valuation(std::span(parts).subspan(next));
    return spec;
  }

  throw Error(ErrorCode::kInvalidArgument,
              "outcome spec '" + std::string(text) + "': unknown mode '" + std::string(mode) + "'");
}

std::vector<std::string> OutcomeSpec::source_columns() const {
  if (mode == Mode::kConfusion) return {truth_column, prediction_column};
  return {column};
}

OutcomeVector build_outcome(const RawTable& table, const OutcomeSpec& spec,
                            std::span<const size_t> rows) {
  switch (spec.mode) {
    case OutcomeSpec::Mode::kAttribute: {
      const auto values = numeric_rows(table, spec.column, rows);
      return attribute_outcome(values);
    }
    case OutcomeSpec::Mode::kConfusion: {
      const auto truth = bool_column(table, spec.truth_column, rows);
      const auto prediction = bool_column(table, spec.prediction_column, rows);
      // std::vector<bool> has no contiguous storage.
      std::unique_ptr<bool[]> t(new bool[truth.size()]);
      std::unique_ptr<bool[]> p(new bool[prediction.size()]);
      std::copy(truth.begin(), truth.end(), t.get());
      std::copy(prediction.begin(), prediction.end(), p.get());
      return confusion_outcome(std::span<const bool>(t.get(), truth.size()),
                               std::span<const bool>(p.get(), prediction.size()), spec.confusion);
    }
    case OutcomeSpec::Mode::kRank: {
      const auto values = numeric_rows(table, spec.column, rows);
      std::vector<uint64_t> ranks;
      if (spec.score_direction) {
        ranks = ranks_from_score(values, *spec.score_direction);
      } else {
        ranks.reserve(values.size());
        for (size_t i = 0; i < values.size(); ++i) {
          const auto& v = values[i];
          if (!v || *v < 0 || *v != std::floor(*v)) {
            throw Error(ErrorCode::kInvalidArgument,
                        "rank column '" + spec.column + "' row " + std::to_string(rows[i] + 1) +
                            " is not a non-negative integer");
          }
          ranks.push_back(static_cast<uint64_t>(*v));
        }
      }
      return rank_outcome(ranks, spec.valuation);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown outcome mode");
}

OutcomeVector build_outcome(const RawTable& table, const OutcomeSpec& spec) {
  std::vector<size_t> rows(table.num_rows());
  std::iota(rows.begin(), rows.end(), size_t{0});
  return build_outcome(table, spec, rows);
}

}  // namespace divminer
