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

#include "mrlab/agg_jobs.h"

#include <array>
#include <charconv>
#include <chrono>

#include "mrlab/codec.h"
#include "mrlab/errors.h"

namespace mrlab {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' ||
         c == '\r';
}

void SumPairs(std::string_view key, std::span<const std::string> values,
              Emitter& out) {
  double sum = 0.0;
  double count = 0.0;
  for (const auto& v : values) {
    const auto pair = DecodeVector(v);
    if (pair.size() != 2) throw ParseError("expected a [sum, count] pair");
    sum += pair[0];
    count += pair[1];
  }
  const std::array<double, 2> merged{sum, count};
  out.Emit(std::string(key), EncodeVector(merged));
}

void SumCounts(std::string_view key, std::span<const std::string> values,
               Emitter& out) {
  std::uint64_t total = 0;
  for (const auto& v : values) total += DecodeCount(v);
  out.Emit(std::string(key), EncodeCount(total));
}

int ParseDigits(std::string_view s) {
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return -1;
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

bool IsIsoDate(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  const int y = ParseDigits(text.substr(0, 4));
  const int m = ParseDigits(text.substr(5, 2));
  const int d = ParseDigits(text.substr(8, 2));
  if (y < 0 || m < 0 || d < 0) return false;
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  return ymd.ok();
}

std::vector<CallRecord> ParseCallRecords(const CsvTable& table) {
  const std::size_t date_col = table.ColumnIndex("date");
  const std::size_t caller_col = table.ColumnIndex("caller");
  const std::size_t callee_col = table.ColumnIndex("callee");
  const std::size_t duration_col = table.ColumnIndex("duration");
  std::vector<CallRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    CallRecord rec;
    rec.date = row[date_col];
    if (!IsIsoDate(rec.date)) {
      throw ParseError("invalid ISO-8601 date '" + rec.date + "'", r + 1);
    }
    rec.caller = row[caller_col];
    rec.callee = row[callee_col];
    if (rec.caller.find(kKeySeparator) != std::string::npos) {
      throw ParseError("caller contains a 0x1F byte", r + 1);
    }
    rec.duration = ParseDouble(row[duration_col], r + 1);
    if (rec.duration < 0.0) {
      throw ParseError("negative duration", r + 1);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<CallRecord> ReadCallRecords(std::istream& in) {
  return ParseCallRecords(ReadCsv(in));
}

std::vector<std::string> Tokenize(std::string_view document) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < document.size()) {
    while (i < document.size() && IsSpace(document[i])) ++i;
    const std::size_t start = i;
    while (i < document.size() && !IsSpace(document[i])) ++i;
    if (i > start) tokens.emplace_back(document.substr(start, i - start));
  }
  return tokens;
}

JobSpec<CallRecord> AvgDurationByDateJob() {
  JobSpec<CallRecord> job;
  job.mapper = [](const CallRecord& r, MapContext&, Emitter& out) {
    const std::array<double, 2> pair{r.duration, 1.0};
    out.Emit(KeyBuilder().Add(r.date).bytes(), EncodeVector(pair));
  };
  job.combiner = SumPairs;
  job.reducer = [](std::string_view key, std::span<const std::string> values,
                   Emitter& out) {
    Emitter merged;
    SumPairs(key, values, merged);
    const auto pair = DecodeVector(merged.pairs().front().value);
    const std::array<double, 2> mean_count{pair[0] / pair[1], pair[1]};
    out.Emit(std::string(key), EncodeVector(mean_count));
  };
  return job;
}

JobSpec<CallRecord> CallsPerDateNumberJob() {
  JobSpec<CallRecord> job;
  job.mapper = [](const CallRecord& r, MapContext&, Emitter& out) {
    out.Emit(KeyBuilder().Add(r.date).Add(r.caller).bytes(), EncodeCount(1));
  };
  job.combiner = SumCounts;
  job.reducer = SumCounts;
  return job;
}

JobSpec<std::string> WordCountJob() {
  JobSpec<std::string> job;
  job.mapper = [](const std::string& doc, MapContext&, Emitter& out) {
    for (auto& token : Tokenize(doc)) {
      out.Emit(KeyBuilder().Add(token).bytes(), EncodeCount(1));
    }
  };
  job.combiner = SumCounts;
  job.reducer = SumCounts;
  return job;
}

AggResult<DateAverage> AvgDurationByDate(std::span<const CallRecord> records,
                                         const ClusterConfig& config) {
  JobResult run = RunJob(AvgDurationByDateJob(), records, config);
  AggResult<DateAverage> result{{}, run.stats};
  for (const KeyValue& kv : run.output) {
    KeyReader key(kv.key);
    const auto mean_count = DecodeVector(kv.value);
    result.rows.push_back({std::string(key.String()), mean_count[0],
                           static_cast<std::uint64_t>(mean_count[1])});
  }
  return result;
}

AggResult<DateCallerCount> CallsPerDateNumber(
    std::span<const CallRecord> records, const ClusterConfig& config) {
  JobResult run = RunJob(CallsPerDateNumberJob(), records, config);
  AggResult<DateCallerCount> result{{}, run.stats};
  for (const KeyValue& kv : run.output) {
    KeyReader key(kv.key);
    std::string date(key.String());
    std::string caller(key.String());
    result.rows.push_back(
        {std::move(date), std::move(caller), DecodeCount(kv.value)});
  }
  return result;
}

AggResult<TokenCount> WordCount(std::span<const std::string> documents,
                                const ClusterConfig& config) {
  JobResult run = RunJob(WordCountJob(), documents, config);
  AggResult<TokenCount> result{{}, run.stats};
  for (const KeyValue& kv : run.output) {
    result.rows.push_back({kv.key, DecodeCount(kv.value)});
  }
  return result;
}

}  // namespace mrlab
