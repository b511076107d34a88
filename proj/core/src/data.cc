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

#include "mrlab/data.h"

#include "mrlab/codec.h"
#include "mrlab/errors.h"

namespace mrlab {

std::vector<LabeledRow> ToLabeledRows(const NumericTable& table,
                                      std::size_t label_column) {
  if (label_column >= table.header.size()) {
    throw ParameterError("label column index out of range");
  }
  std::vector<LabeledRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& values : table.rows) {
    LabeledRow row;
    row.features.reserve(values.size() - 1);
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (c == label_column) {
        row.label = values[c];
      } else {
        row.features.push_back(values[c]);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string EncodeLabeledRow(const LabeledRow& row) {
  std::vector<double> packed(row.features);
  packed.push_back(row.label);
  return EncodeVector(packed);
}

LabeledRow DecodeLabeledRow(std::string_view bytes) {
  std::vector<double> packed = DecodeVector(bytes);
  if (packed.empty()) throw ParseError("labeled row value is empty");
  LabeledRow row;
  row.label = packed.back();
  packed.pop_back();
  row.features = std::move(packed);
  return row;
}

}  // namespace mrlab
