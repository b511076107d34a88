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

#ifndef MRLAB_DATA_H_
#define MRLAB_DATA_H_

#include <cstddef>
#include <string_view>
#include <vector>

#include "mrlab/csv.h"
#include "mrlab/engine.h"

namespace mrlab {

// A feature vector with its response.
struct LabeledRow {
  std::vector<double> features;
  double label = 0.0;

  friend bool operator==(const LabeledRow&, const LabeledRow&) = default;
};

template <>
struct RecordTraits<LabeledRow> {
  static std::size_t Bytes(const LabeledRow& r) {
    return 8 * (r.features.size() + 1);
  }
};

// Splits each row into features (every other column, in order) and the
// label column.
std::vector<LabeledRow> ToLabeledRows(const NumericTable& table,
                                      std::size_t label_column);

// Wire form of a LabeledRow: a vector value [features..., label].
std::string EncodeLabeledRow(const LabeledRow& row);
LabeledRow DecodeLabeledRow(std::string_view bytes);

}  // namespace mrlab

#endif  // MRLAB_DATA_H_
