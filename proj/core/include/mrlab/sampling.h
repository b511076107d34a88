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

#ifndef MRLAB_SAMPLING_H_
#define MRLAB_SAMPLING_H_

// Simple random sampling of n records out of N: a sequential reservoir, a
// sort-by-random-key MapReduce job, and ScanSRS, which uses Bernstein
// thresholds to shrink what goes through the sort to O(n) candidates.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mrlab/codec.h"
#include "mrlab/engine.h"
#include "mrlab/errors.h"
#include "mrlab/rng.h"

namespace mrlab {

// Fixed-capacity uniform sample of a stream of unknown length.
template <typename Record>
class Reservoir {
 public:
  explicit Reservoir(std::size_t capacity) : capacity_(capacity) {
    if (capacity < 1) throw ParameterError("reservoir capacity must be >= 1");
    rows_.reserve(capacity);
  }

  // The i-th record (1-based) fills slot i while i <= n; afterwards it
  // replaces slot j when a uniform j in [1, i] satisfies j <= n.
  void Offer(const Record& record, Rng& rng) {
    ++seen_;
    if (rows_.size() < capacity_) {
      rows_.push_back(record);
      return;
    }
    const std::uint64_t j = rng.UniformInt(1, seen_);
    if (j <= capacity_) rows_[j - 1] = record;
  }

  std::size_t capacity() const { return capacity_; }
  std::uint64_t seen_count() const { return seen_; }
  const std::vector<Record>& rows() const& { return rows_; }
  std::vector<Record> rows() && { return std::move(rows_); }

 private:
  std::size_t capacity_;
  std::uint64_t seen_ = 0;
  std::vector<Record> rows_;
};

template <typename Record>
std::vector<Record> ReservoirSample(std::span<const Record> records,
                                    std::size_t n, std::uint64_t seed) {
  Reservoir<Record> reservoir(n);
  Rng rng(seed);
  for (const Record& r : records) reservoir.Offer(r, rng);
  return std::move(reservoir).rows();
}

struct SampleResult {
  // Dataset indices of the sample, in ascending random-key order.
  std::vector<std::size_t> indices;
  RunStats stats;
};

// Key source for SortSample; the default draws Uniform01 from the split
// stream. Replaceable so tests can pin the key assignment.
using SortKeySource = std::function<double(MapContext&)>;

namespace internal {

// Emits ((key, split_id, record_index), record_index).
void EmitKeyedIndex(double key, const MapContext& ctx, Emitter& out);
void IdentityReduce(std::string_view key, std::span<const std::string> values,
                    Emitter& out);
std::size_t DecodeIndexValue(const KeyValue& kv);

}  // namespace internal

template <typename Record>
JobSpec<Record> SortSampleJob(SortKeySource key_source = {}) {
  JobSpec<Record> job;
  job.mapper = [key_source](const Record&, MapContext& ctx, Emitter& out) {
    const double key = key_source ? key_source(ctx) : ctx.rng->Uniform01();
    internal::EmitKeyedIndex(key, ctx, out);
  };
  job.reducer = internal::IdentityReduce;
  return job;
}

// Draws an independent uniform key per record, sorts by key through the
// shuffle, keeps the n smallest. Ties break on (split_id, record index).
template <typename Record>
SampleResult SortSample(std::span<const Record> dataset, std::size_t n,
                        const ClusterConfig& config,
                        SortKeySource key_source = {}) {
  if (n < 1 || n > dataset.size()) {
    throw ParameterError("sort sample: need 1 <= n <= N");
  }
  JobResult run = RunJob(SortSampleJob<Record>(std::move(key_source)),
                         dataset, config);
  SampleResult result{{}, run.stats};
  result.indices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.indices.push_back(internal::DecodeIndexValue(run.output[i]));
  }
  return result;
}

struct ScanThresholds {
  double accept = 0.0;    // keys below are taken outright
  double waitlist = 0.0;  // keys in [accept, waitlist) are waitlisted
};

// With p = n/N, g1 = -ln(delta/2)/N and g2 = -(2/3) ln(delta/2)/N:
//   accept   = max(0, p + g1 - sqrt(g1^2 + 2 g1 p))
//   waitlist = min(1, p + g2 + sqrt(g2^2 + 3 g2 p))
// By Bernstein's inequality each of "more than n accepted" and "fewer than
// n candidates" has probability at most delta/2.
ScanThresholds BernsteinThresholds(std::size_t n, std::size_t population,
                                   double delta);

enum class ScanStatus {
  kOk,
  kWaitlistUnderflow,  // fewer than n keys below the waitlist threshold
  kAcceptOverflow,     // more than n keys below the accept threshold
};

const char* ToString(ScanStatus status);

struct ScanResult {
  ScanStatus status = ScanStatus::kOk;
  ScanThresholds thresholds;
  std::size_t accepted = 0;
  std::size_t waitlisted = 0;
  // Exactly n indices on success, empty on failure.
  std::vector<std::size_t> indices;
  RunStats stats;

  bool ok() const { return status == ScanStatus::kOk; }
  std::size_t candidates() const { return accepted + waitlisted; }
};

namespace internal {

ScanResult FinishScan(const ScanThresholds& thresholds, std::size_t n,
                      JobResult run);

}  // namespace internal

// Single pass over the data. Only keys below the waitlist threshold enter
// the shuffle; the sample is the n smallest of them. Sampling failure is
// reported through `status`, never thrown.
template <typename Record>
ScanResult ScanSrs(std::span<const Record> dataset, std::size_t n,
                   double delta, const ClusterConfig& config) {
  if (n < 1 || n > dataset.size()) {
    throw ParameterError("scan_srs: need 1 <= n <= N");
  }
  const ScanThresholds thresholds =
      BernsteinThresholds(n, dataset.size(), delta);
  JobSpec<Record> job;
  job.mapper = [q2 = thresholds.waitlist](const Record&, MapContext& ctx,
                                         Emitter& out) {
    const double key = ctx.rng->Uniform01();
    if (key < q2) internal::EmitKeyedIndex(key, ctx, out);
  };
  job.reducer = internal::IdentityReduce;
  return internal::FinishScan(thresholds, n, RunJob(job, dataset, config));
}

}  // namespace mrlab

#endif  // MRLAB_SAMPLING_H_
