// Copyright 2026 The mrlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrlab/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>

#include "mrlab/errors.h"

namespace mrlab {

std::size_t CsvTable::ColumnIndex(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError("no column named '" + std::string(name) + "'");
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

CsvTable ReadCsv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = SplitFields(line);
    if (!have_header) {
      for (auto f : fields) table.header.emplace_back(f);
      have_header = true;
      continue;
    }
    ++row;
    if (fields.size() != table.header.size()) {
      throw ParseError("expected " + std::to_string(table.header.size()) +
                           " fields, found " + std::to_string(fields.size()),
                       row);
    }
    std::vector<std::string> owned(fields.begin(), fields.end());
    table.rows.push_back(std::move(owned));
    table.lines.push_back(line);
  }
  if (!have_header) throw ParseError("missing CSV header row");
  return table;
}

CsvTable ReadCsvFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return ReadCsv(in);
}

double ParseDouble(std::string_view text, std::size_t row) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    throw ParseError("not a finite number: '" + std::string(text) + "'", row);
  }
  return v;
}

NumericTable ToNumeric(const CsvTable& table) {
  NumericTable out;
  out.header = table.header;
  out.rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<double> values;
    values.reserve(table.rows[r].size());
    for (const auto& cell : table.rows[r]) values.push_back(ParseDouble(cell, r + 1));
    out.rows.push_back(std::move(values));
  }
  return out;
}

}  // namespace mrlab
