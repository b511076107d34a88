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

#include "mrlab/run_stats.h"

namespace mrlab {

RunStats& RunStats::operator+=(const RunStats& other) {
  records_read += other.records_read;
  records_written += other.records_written;
  records_shuffled += other.records_shuffled;
  bytes_read += other.bytes_read;
  bytes_written += other.bytes_written;
  bytes_shuffled += other.bytes_shuffled;
  iterations += other.iterations;
  return *this;
}

nlohmann::ordered_json ToJson(const RunStats& stats) {
  nlohmann::ordered_json j;
  j["records_read"] = stats.records_read;
  j["records_written"] = stats.records_written;
  j["records_shuffled"] = stats.records_shuffled;
  j["bytes_read"] = stats.bytes_read;
  j["bytes_written"] = stats.bytes_written;
  j["bytes_shuffled"] = stats.bytes_shuffled;
  j["iterations"] = stats.iterations;
  return j;
}

RunStats RunStatsFromJson(const nlohmann::ordered_json& json) {
  RunStats s;
  s.records_read = json.at("records_read").get<std::uint64_t>();
  s.records_written = json.at("records_written").get<std::uint64_t>();
  s.records_shuffled = json.at("records_shuffled").get<std::uint64_t>();
  s.bytes_read = json.at("bytes_read").get<std::uint64_t>();
  s.bytes_written = json.at("bytes_written").get<std::uint64_t>();
  s.bytes_shuffled = json.at("bytes_shuffled").get<std::uint64_t>();
  s.iterations = json.at("iterations").get<std::uint64_t>();
  return s;
}

}  // namespace mrlab
