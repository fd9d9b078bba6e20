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

#ifndef DIVMINER_CSV_HPP_
#define DIVMINER_CSV_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace divminer {

// A raw cell: the unparsed text, or nullopt when the cell was empty.
using Cell = std::optional<std::string>;

// Tabular data as read from disk. Every row has exactly one cell per column.
struct RawTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<Cell>> rows;

  size_t num_rows() const { return rows.size(); }
  size_t num_columns() const { return column_names.size(); }

  // Exact name match, else a unique case-insensitive one. column_index()
  // throws Error(kInvalidArgument) when neither exists.
  size_t column_index(std::string_view name) const;
  std::optional<size_t> find_column(std::string_view name) const;

  // Cells of one column, parsed as numbers. Missing cells stay nullopt.
  // Throws Error(kParse) naming the first non-numeric cell.
  std::vector<std::optional<double>> numeric_column(std::string_view name) const;
};

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
};

// RFC-4180 style reader: quoted fields may contain delimiters, doubled quotes
// and line breaks. Empty (unquoted or quoted) fields become missing cells.
RawTable parse_csv(std::istream& in, const CsvOptions& options = {});
RawTable load_csv(const std::string& path, const CsvOptions& options = {});

// Writes a table with quoting where needed; missing cells are written empty.
void write_csv(std::ostream& out, const RawTable& table, char delimiter = ',');

// Quotes a field when it contains the delimiter, a quote or a line break.
std::string csv_escape(std::string_view field, char delimiter = ',');

// Strict full-string numeric parse (no leading/trailing garbage, no nan/inf).
std::optional<double> parse_number(std::string_view text);

}  // namespace divminer

#endif  // DIVMINER_CSV_HPP_
