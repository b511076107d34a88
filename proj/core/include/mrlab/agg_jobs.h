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

#ifndef MRLAB_AGG_JOBS_H_
#define MRLAB_AGG_JOBS_H_

// Ready-made aggregation jobs over call-detail records and text documents.

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "mrlab/csv.h"
#include "mrlab/engine.h"

namespace mrlab {

// One row of a date,caller,callee,duration CSV. Dates are ISO-8601
// (YYYY-MM-DD); duration is in seconds and non-negative.
struct CallRecord {
  std::string date;
  std::string caller;
  std::string callee;
  double duration = 0.0;

  friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

template <>
struct RecordTraits<CallRecord> {
  static std::size_t Bytes(const CallRecord& r) {
    return r.date.size() + r.caller.size() + r.callee.size() + 8;
  }
};

bool IsIsoDate(std::string_view text);

// Requires the columns date, caller, callee, duration (any order). Errors
// carry the 1-based data row.
std::vector<CallRecord> ParseCallRecords(const CsvTable& table);
std::vector<CallRecord> ReadCallRecords(std::istream& in);

struct DateAverage {
  std::string date;
  double mean = 0.0;
  std::uint64_t count = 0;

  friend bool operator==(const DateAverage&, const DateAverage&) = default;
};

struct DateCallerCount {
  std::string date;
  std::string caller;
  std::uint64_t count = 0;

  friend bool operator==(const DateCallerCount&,
                         const DateCallerCount&) = default;
};

struct TokenCount {
  std::string token;
  std::uint64_t count = 0;

  friend bool operator==(const TokenCount&, const TokenCount&) = default;
};

// Map emits (date, [duration, 1]); combiner and reducer merge [sum, count]
// pairs; reduce outputs (date, [mean, count]).
JobSpec<CallRecord> AvgDurationByDateJob();
// Map emits ((date, caller), 1); reduce counts.
JobSpec<CallRecord> CallsPerDateNumberJob();
// One record per document; tokens are maximal runs of non-whitespace.
JobSpec<std::string> WordCountJob();

template <typename Row>
struct AggResult {
  std::vector<Row> rows;
  RunStats stats;
};

AggResult<DateAverage> AvgDurationByDate(std::span<const CallRecord> records,
                                         const ClusterConfig& config);
AggResult<DateCallerCount> CallsPerDateNumber(
    std::span<const CallRecord> records, const ClusterConfig& config);
AggResult<TokenCount> WordCount(std::span<const std::string> documents,
                                const ClusterConfig& config);

std::vector<std::string> Tokenize(std::string_view document);

}  // namespace mrlab

#endif  // MRLAB_AGG_JOBS_H_
