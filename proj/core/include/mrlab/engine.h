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

#ifndef MRLAB_ENGINE_H_
#define MRLAB_ENGINE_H_

// Single-process MapReduce engine simulating a cluster of `num_splits` map
// nodes. Map tasks run per input split, the shuffle groups emitted pairs by
// key bytes, and reduce runs once per distinct key.
//
// Output order is canonical and independent of physical execution order:
// groups ascend by key bytes, and values inside a group are ordered by
// (split_id, emission index within the split).

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "mrlab/errors.h"
#include "mrlab/rng.h"
#include "mrlab/run_stats.h"

namespace mrlab {

struct KeyValue {
  std::string key;
  std::string value;

  friend bool operator==(const KeyValue&, const KeyValue&) = default;
};

enum class IterationMode { kDisk, kMemory };
enum class Execution { kSequential, kParallel };

const char* ToString(IterationMode mode);
IterationMode ParseIterationMode(std::string_view text);

// kSequential when MRLAB_SEQUENTIAL=1 is set, kParallel otherwise.
Execution ExecutionFromEnvironment();

struct ClusterConfig {
  // Clamped to the dataset size at run time.
  std::size_t num_splits = 1;
  IterationMode iteration_mode = IterationMode::kDisk;
  std::uint64_t seed = 0;
  Execution execution = Execution::kSequential;
};

// Contiguous [first_index, last_index] range of the source dataset.
struct SplitRange {
  std::uint32_t split_id = 0;
  std::size_t first_index = 0;
  std::size_t last_index = 0;

  std::size_t size() const { return last_index - first_index + 1; }
  friend bool operator==(const SplitRange&, const SplitRange&) = default;
};

// Split plan for `n` records: min(num_splits, n) splits, the first
// (n mod s) of them one record larger. Throws EmptyInputError if n == 0 and
// ParameterError if num_splits == 0.
std::vector<SplitRange> PlanSplits(std::size_t n, std::size_t num_splits);

template <typename Record>
struct InputSplit {
  std::uint32_t split_id = 0;
  std::span<const Record> records;
  SplitRange origin;
};

template <typename Record>
std::vector<InputSplit<Record>> Partition(std::span<const Record> dataset,
                                          std::size_t num_splits) {
  std::vector<InputSplit<Record>> splits;
  for (const SplitRange& range : PlanSplits(dataset.size(), num_splits)) {
    splits.push_back({range.split_id,
                      dataset.subspan(range.first_index, range.size()), range});
  }
  return splits;
}

class Emitter {
 public:
  void Emit(std::string key, std::string value) {
    pairs_.push_back({std::move(key), std::move(value)});
  }
  std::vector<KeyValue>& pairs() { return pairs_; }

 private:
  std::vector<KeyValue> pairs_;
};

struct MapContext {
  std::uint32_t split_id = 0;
  // Index of the record in the whole dataset.
  std::size_t record_index = 0;
  // Job seed, for mappers that derive their own per-record streams.
  std::uint64_t seed = 0;
  // Split-local stream seeded with DeriveSeed(seed, split_id).
  Rng* rng = nullptr;
};

template <typename Record>
using Mapper = std::function<void(const Record&, MapContext&, Emitter&)>;

// Also the combiner signature.
using Reducer = std::function<void(std::string_view key,
                                   std::span<const std::string> values,
                                   Emitter&)>;

template <typename Record>
struct JobSpec {
  Mapper<Record> mapper;
  Reducer reducer;
  // Optional. Runs per split over that split's grouped map output.
  Reducer combiner;
};

struct Group {
  std::string key;
  std::vector<std::string> values;

  friend bool operator==(const Group&, const Group&) = default;
};

// `emitted[s]` holds split s's pairs in emission order.
std::vector<Group> Shuffle(std::vector<std::vector<KeyValue>> emitted);

// Byte size of a record as stored in the simulated base; feeds bytes_read.
template <typename Record, typename = void>
struct RecordTraits {
  static std::size_t Bytes(const Record&) {
    static_assert(std::is_trivially_copyable_v<Record>,
                  "specialize mrlab::RecordTraits for this record type");
    return sizeof(Record);
  }
};

template <>
struct RecordTraits<std::string> {
  static std::size_t Bytes(const std::string& r) { return r.size(); }
};

template <>
struct RecordTraits<std::vector<double>> {
  static std::size_t Bytes(const std::vector<double>& r) {
    return 8 * r.size();
  }
};

struct JobResult {
  std::vector<KeyValue> output;
  RunStats stats;
};

namespace internal {

// Runs body(i) for i in [0, count). Rethrows the exception of the lowest
// failing index after all tasks finish.
void ParallelFor(std::size_t count, Execution execution,
                 const std::function<void(std::size_t)>& body);

std::vector<KeyValue> Combine(std::vector<KeyValue> pairs,
                              const Reducer& combiner,
                              std::uint32_t split_id);

std::vector<KeyValue> ReducePhase(const std::vector<Group>& groups,
                                  const Reducer& reducer,
                                  Execution execution);

}  // namespace internal

template <typename Record>
JobResult RunJob(const JobSpec<Record>& job, std::span<const Record> dataset,
                 const ClusterConfig& config) {
  if (!job.mapper || !job.reducer) {
    throw ParameterError("RunJob: job needs both a mapper and a reducer");
  }
  JobResult result;
  result.stats.iterations = 1;
  if (dataset.empty()) return result;

  const auto splits = Partition(dataset, config.num_splits);
  std::vector<std::vector<KeyValue>> emitted(splits.size());
  std::vector<std::uint64_t> split_bytes(splits.size(), 0);

  internal::ParallelFor(splits.size(), config.execution, [&](std::size_t s) {
    const InputSplit<Record>& split = splits[s];
    Rng rng(DeriveSeed(config.seed, split.split_id));
    MapContext ctx{split.split_id, 0, config.seed, &rng};
    Emitter emitter;
    std::uint64_t bytes = 0;
    for (std::size_t i = 0; i < split.records.size(); ++i) {
      ctx.record_index = split.origin.first_index + i;
      bytes += RecordTraits<Record>::Bytes(split.records[i]);
      try {
        job.mapper(split.records[i], ctx, emitter);
      } catch (const std::exception& e) {
        throw JobError(e.what(), {JobError::Phase::kMap, split.split_id,
                                  ctx.record_index, {}, {}});
      }
    }
    split_bytes[s] = bytes;
    emitted[s] = job.combiner ? internal::Combine(std::move(emitter.pairs()),
                                                  job.combiner, split.split_id)
                              : std::move(emitter.pairs());
  });

  result.stats.records_read = dataset.size();
  for (std::size_t s = 0; s < splits.size(); ++s) {
    result.stats.bytes_read += split_bytes[s];
    result.stats.records_shuffled += emitted[s].size();
    for (const KeyValue& kv : emitted[s]) {
      result.stats.bytes_shuffled += kv.key.size() + kv.value.size();
    }
  }

  const std::vector<Group> groups = Shuffle(std::move(emitted));
  result.output = internal::ReducePhase(groups, job.reducer, config.execution);
  result.stats.records_written = result.output.size();
  for (const KeyValue& kv : result.output) {
    result.stats.bytes_written += kv.key.size() + kv.value.size();
  }
  return result;
}

template <typename Record>
JobResult RunJob(const JobSpec<Record>& job,
                 const std::vector<Record>& dataset,
                 const ClusterConfig& config) {
  return RunJob(job, std::span<const Record>(dataset), config);
}

// Iterated MapReduce driver. Each round builds a job from the current
// state, runs it, and folds the job output into the next state.
template <typename Record, typename State>
struct IterativeJob {
  std::function<JobSpec<Record>(int iteration, const State&)> make_job;
  std::function<State(int iteration, const State& previous,
                      std::vector<KeyValue> output)>
      update;
  // Optional early stop, evaluated after each update.
  std::function<bool(const State& previous, const State& next)> converged;
};

template <typename State>
struct IterativeResult {
  State state;
  RunStats stats;
};

// Runs at most `max_iters` rounds. Round t uses seed DeriveSeed(seed, t).
//
// Disk mode charges each round a full dataset read plus a full dataset
// rewrite, as when rounds communicate through the distributed file system.
// Memory mode charges the dataset read once and keeps it resident.
template <typename Record, typename State>
IterativeResult<State> RunIterative(const IterativeJob<Record, State>& job,
                                    State initial, int max_iters,
                                    std::span<const Record> dataset,
                                    const ClusterConfig& config) {
  if (max_iters < 1) throw ParameterError("RunIterative: max_iters must be >= 1");
  if (!job.make_job || !job.update) {
    throw ParameterError("RunIterative: make_job and update are required");
  }
  std::uint64_t dataset_bytes = 0;
  for (const Record& r : dataset) dataset_bytes += RecordTraits<Record>::Bytes(r);

  IterativeResult<State> result{std::move(initial), {}};
  for (int t = 0; t < max_iters; ++t) {
    ClusterConfig round_config = config;
    round_config.seed = DeriveSeed(config.seed, static_cast<std::uint64_t>(t));
    JobResult round;
    try {
      round = RunJob(job.make_job(t, result.state), dataset, round_config);
    } catch (const JobError& e) {
      throw e.WithIteration(t);
    }

    RunStats& stats = result.stats;
    stats.iterations += 1;
    stats.records_shuffled += round.stats.records_shuffled;
    stats.bytes_shuffled += round.stats.bytes_shuffled;
    stats.records_written += round.stats.records_written;
    stats.bytes_written += round.stats.bytes_written;
    if (config.iteration_mode == IterationMode::kDisk || t == 0) {
      stats.records_read += round.stats.records_read;
      stats.bytes_read += round.stats.bytes_read;
    }
    if (config.iteration_mode == IterationMode::kDisk) {
      stats.records_written += dataset.size();
      stats.bytes_written += dataset_bytes;
    }

    State next = job.update(t, result.state, std::move(round.output));
    const bool done = job.converged && job.converged(result.state, next);
    result.state = std::move(next);
    if (done) break;
  }
  return result;
}

template <typename Record, typename State>
IterativeResult<State> RunIterative(const IterativeJob<Record, State>& job,
                                    State initial, int max_iters,
                                    const std::vector<Record>& dataset,
                                    const ClusterConfig& config) {
  return RunIterative(job, std::move(initial), max_iters,
                      std::span<const Record>(dataset), config);
}

}  // namespace mrlab

#endif  // MRLAB_ENGINE_H_
