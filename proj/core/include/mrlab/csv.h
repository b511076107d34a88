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

#ifndef MRLAB_CSV_H_
#define MRLAB_CSV_H_

// The one CSV dialect mrlab reads: comma-separated, header row required,
// no quoting, '.' decimal separator. Blank lines are ignored.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace mrlab {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // Data lines as they appeared in the input (without line terminator).
  std::vector<std::string> lines;

  // Throws ParseError if the column is missing.
  std::size_t ColumnIndex(std::string_view name) const;
};

CsvTable ReadCsv(std::istream& in);
CsvTable ReadCsvFile(const std::filesystem::path& path);

std::vector<std::string_view> SplitFields(std::string_view line);

// Strict full-field parse; `row` is attached to the ParseError.
double ParseDouble(std::string_view text, std::size_t row);

// A header plus numeric rows.
struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

NumericTable ToNumeric(const CsvTable& table);

}  // namespace mrlab

#endif  // MRLAB_CSV_H_
