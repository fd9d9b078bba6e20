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

#include "divminer/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "divminer/error.hpp"

namespace divminer {
namespace {

struct Field {
  std::string text;
  bool quoted = false;
};

// Splits the whole buffer into records of fields. Line numbers are tracked so
// errors can name the physical line a record started on.
class CsvScanner {
 public:
  CsvScanner(std::string_view data, char delimiter)
      : data_(data), delimiter_(delimiter) {}

  // Returns false at end of input.
  bool next(std::vector<Field>& record, size_t& start_line) {
    record.clear();
    if (pos_ >= data_.size()) return false;
    start_line = line_;
    Field field;
    bool in_quotes = false;
    while (pos_ < data_.size()) {
      const char c = data_[pos_++];
      if (in_quotes) {
        if (c == '"') {
          if (pos_ < data_.size() && data_[pos_] == '"') {
            field.text.push_back('"');
            ++pos_;
          } else {
            in_quotes = false;
          }
        } else {
          if (c == '\n') ++line_;
          field.text.push_back(c);
        }
        continue;
      }
      if (c == '"' && field.text.empty() && !field.quoted) {
        in_quotes = true;
        field.quoted = true;
      } else if (c == delimiter_) {
        record.push_back(std::move(field));
        field = Field{};
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
        ++line_;
        record.push_back(std::move(field));
        return true;
      } else {
        field.text.push_back(c);
      }
    }
    if (in_quotes) {
      throw Error(ErrorCode::kParse, "unterminated quoted field starting on line " +
                                         std::to_string(start_line));
    }
    record.push_back(std::move(field));
    return true;
  }

 private:
  std::string_view data_;
  char delimiter_;
  size_t pos_ = 0;
  size_t line_ = 1;
};

bool is_blank(const std::vector<Field>& record) {
  return record.size() == 1 && record[0].text.empty() && !record[0].quoted;
}

}  // namespace

std::optional<size_t> RawTable::find_column(std::string_view name) const {
  for (size_t i = 0; i < column_names.size(); ++i) {
    if (column_names[i] == name) return i;
  }
  // Fall back to a unique case-insensitive match.
  auto lower = [](std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  };
  const std::string wanted = lower(name);
  std::optional<size_t> found;
  for (size_t i = 0; i < column_names.size(); ++i) {
    if (lower(column_names[i]) != wanted) continue;
    if (found) return std::nullopt;
    found = i;
  }
  return found;
}

size_t RawTable::column_index(std::string_view name) const {
  auto index = find_column(name);
  if (!index) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown column '" + std::string(name) + "'");
  }
  return *index;
}

std::vector<std::optional<double>> RawTable::numeric_column(
    std::string_view name) const {
  const size_t col = column_index(name);
  std::vector<std::optional<double>> values;
  values.reserve(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    const Cell& cell = rows[r][col];
    if (!cell) {
      values.emplace_back();
      continue;
    }
    auto number = parse_number(*cell);
    if (!number) {
      throw Error(ErrorCode::kParse, "column '" + std::string(name) +
                                         "' is not numeric: row " +
                                         std::to_string(r + 1) + " holds '" +
                                         *cell + "'");
    }
    values.push_back(number);
  }
  return values;
}

std::optional<double> parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

RawTable parse_csv(std::istream& in, const CsvOptions& options) {
  const std::string data{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  std::string_view view = data;
  if (view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);

  CsvScanner scanner(view, options.delimiter);
  RawTable table;
  std::vector<Field> record;
  size_t line = 0;

  if (options.has_header) {
    while (scanner.next(record, line) && is_blank(record)) {
    }
    if (record.empty() || is_blank(record)) {
      throw Error(ErrorCode::kParse, "missing header row");
    }
    for (auto& field : record) table.column_names.push_back(std::move(field.text));
  }

  while (scanner.next(record, line)) {
    if (is_blank(record)) continue;
    if (table.column_names.empty()) {
      for (size_t i = 0; i < record.size(); ++i) {
        table.column_names.push_back("c" + std::to_string(i + 1));
      }
    }
    if (record.size() != table.column_names.size()) {
      throw Error(ErrorCode::kParse,
                  "ragged row " + std::to_string(table.rows.size() + 1) +
                      " (line " + std::to_string(line) + "): expected " +
                      std::to_string(table.column_names.size()) +
                      " fields, found " + std::to_string(record.size()));
    }
    std::vector<Cell> row;
    row.reserve(record.size());
    for (auto& field : record) {
      if (field.text.empty()) {
        row.emplace_back();
      } else {
        row.emplace_back(std::move(field.text));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

RawTable load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return parse_csv(in, options);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string csv_escape(std::string_view field, char delimiter) {
  const bool needs_quotes =
      field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
      std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv(std::ostream& out, const RawTable& table, char delimiter) {
  for (size_t i = 0; i < table.column_names.size(); ++i) {
    if (i) out << delimiter;
    out << csv_escape(table.column_names[i], delimiter);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << delimiter;
      if (row[i]) out << csv_escape(*row[i], delimiter);
    }
    out << '\n';
  }
}

}  // namespace divminer
