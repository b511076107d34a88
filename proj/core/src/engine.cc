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

#include "mrlab/engine.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace mrlab {
namespace {

std::string DescribeLocation(const JobError::Location& loc) {
  std::string out;
  switch (loc.phase) {
    case JobError::Phase::kMap:
      out = "map";
      break;
    case JobError::Phase::kCombine:
      out = "combine";
      break;
    case JobError::Phase::kReduce:
      out = "reduce";
      break;
  }
  if (loc.iteration) out += " iteration " + std::to_string(*loc.iteration);
  if (loc.phase != JobError::Phase::kReduce) {
    out += " split " + std::to_string(loc.split_id);
  }
  if (loc.record_index) out += " record " + std::to_string(*loc.record_index);
  if (loc.key) out += " key of " + std::to_string(loc.key->size()) + " bytes";
  return out;
}

}  // namespace

JobError::JobError(const std::string& cause, Location location)
    : std::runtime_error(DescribeLocation(location) + ": " + cause),
      cause_(cause),
      location_(std::move(location)) {}

JobError JobError::WithIteration(int iteration) const {
  Location loc = location_;
  loc.iteration = iteration;
  return JobError(cause_, std::move(loc));
}

const char* ToString(IterationMode mode) {
  return mode == IterationMode::kDisk ? "disk" : "memory";
}

IterationMode ParseIterationMode(std::string_view text) {
  if (text == "disk") return IterationMode::kDisk;
  if (text == "memory") return IterationMode::kMemory;
  throw ParameterError("unknown iteration mode '" + std::string(text) +
                       "' (expected disk or memory)");
}

Execution ExecutionFromEnvironment() {
  const char* value = std::getenv("MRLAB_SEQUENTIAL");
  return value != nullptr && std::string_view(value) == "1"
             ? Execution::kSequential
             : Execution::kParallel;
}

std::vector<SplitRange> PlanSplits(std::size_t n, std::size_t num_splits) {
  if (n == 0) throw EmptyInputError("cannot partition an empty dataset");
  if (num_splits == 0) throw ParameterError("num_splits must be >= 1");
  const std::size_t s = std::min(num_splits, n);
  const std::size_t base = n / s;
  const std::size_t larger = n % s;
  std::vector<SplitRange> plan;
  plan.reserve(s);
  std::size_t first = 0;
  for (std::size_t i = 0; i < s; ++i) {
    const std::size_t size = base + (i < larger ? 1 : 0);
    plan.push_back({static_cast<std::uint32_t>(i), first, first + size - 1});
    first += size;
  }
  return plan;
}

std::vector<Group> Shuffle(std::vector<std::vector<KeyValue>> emitted) {
  std::vector<KeyValue*> order;
  std::size_t total = 0;
  for (const auto& split : emitted) total += split.size();
  order.reserve(total);
  // Collected in (split_id, emission index) order; the stable sort keeps it
  // within equal keys.
  for (auto& split : emitted) {
    for (KeyValue& kv : split) order.push_back(&kv);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const KeyValue* a, const KeyValue* b) {
                     return a->key < b->key;
                   });
  std::vector<Group> groups;
  for (KeyValue* kv : order) {
    if (groups.empty() || groups.back().key != kv->key) {
      groups.push_back({std::move(kv->key), {}});
    }
    groups.back().values.push_back(std::move(kv->value));
  }
  return groups;
}

namespace internal {

void ParallelFor(std::size_t count, Execution execution,
                 const std::function<void(std::size_t)>& body) {
  if (execution == Execution::kSequential || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::min<std::size_t>(
      count, std::max(2u, std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

std::vector<KeyValue> Combine(std::vector<KeyValue> pairs,
                              const Reducer& combiner,
                              std::uint32_t split_id) {
  std::vector<std::vector<KeyValue>> single;
  single.push_back(std::move(pairs));
  const std::vector<Group> groups = Shuffle(std::move(single));
  Emitter emitter;
  for (const Group& g : groups) {
    try {
      combiner(g.key, g.values, emitter);
    } catch (const std::exception& e) {
      throw JobError(e.what(),
                     {JobError::Phase::kCombine, split_id, {}, g.key, {}});
    }
  }
  return std::move(emitter.pairs());
}

std::vector<KeyValue> ReducePhase(const std::vector<Group>& groups,
                                  const Reducer& reducer,
                                  Execution execution) {
  std::vector<std::vector<KeyValue>> outputs(groups.size());
  ParallelFor(groups.size(), execution, [&](std::size_t g) {
    Emitter emitter;
    try {
      reducer(groups[g].key, groups[g].values, emitter);
    } catch (const std::exception& e) {
      throw JobError(e.what(),
                     {JobError::Phase::kReduce, 0, {}, groups[g].key, {}});
    }
    outputs[g] = std::move(emitter.pairs());
  });
  std::vector<KeyValue> out;
  for (auto& group_output : outputs) {
    for (KeyValue& kv : group_output) out.push_back(std::move(kv));
  }
  return out;
}

}  // namespace internal
}  // namespace mrlab
