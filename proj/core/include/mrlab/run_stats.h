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

#ifndef MRLAB_RUN_STATS_H_
#define MRLAB_RUN_STATS_H_

#include <cstdint>

#include <nlohmann/json.hpp>

namespace mrlab {

// I/O ledger for one job or one iterative run. "read" counts dataset
// records fed to mappers; "written" counts records persisted (reduce output,
// plus the per-round dataset rewrite of disk-mode iterations); "shuffled"
// counts pairs crossing the shuffle barrier after any combiner.
struct RunStats {
  std::uint64_t records_read = 0;
  std::uint64_t records_written = 0;
  std::uint64_t records_shuffled = 0;
  std::uint64_t bytes_read = 0;
  std::uint64_t bytes_written = 0;
  std::uint64_t bytes_shuffled = 0;
  std::uint64_t iterations = 0;

  RunStats& operator+=(const RunStats& other);
  friend bool operator==(const RunStats&, const RunStats&) = default;
};

// Flat JSON object with one integer field per counter.
nlohmann::ordered_json ToJson(const RunStats& stats);
RunStats RunStatsFromJson(const nlohmann::ordered_json& json);

}  // namespace mrlab

#endif  // MRLAB_RUN_STATS_H_
