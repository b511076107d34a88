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

#ifndef MRLAB_TOOLS_COMMANDS_H_
#define MRLAB_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrlab/engine.h"

namespace mrlab::cli {

using Json = nlohmann::ordered_json;

// Flags every subcommand accepts.
struct SharedFlags {
  std::size_t splits = 1;
  std::uint64_t seed = 0;
  std::string mode = "disk";
  std::string out;
  std::string input;

  ClusterConfig Config() const;
};

// Raised for failures of the algorithm itself rather than of its inputs:
// exit code 1.
class AlgorithmError : public std::runtime_error {
 public:
  AlgorithmError(std::string kind, const std::string& message, Json details = Json::object())
      : std::runtime_error(message), kind_(std::move(kind)), details_(std::move(details)) {}
  const std::string& kind() const { return kind_; }
  const Json& details() const { return details_; }

 private:
  std::string kind_;
  Json details_;
};

struct SampleFlags {
  std::string method = "reservoir";
  std::size_t n = 1;
  double delta = 0.01;
};

struct KMeansFlags {
  std::size_t k = 2;
  int iters = 100;
  double tol = 1e-6;
  std::string centers_out;
  std::string assignments_out;
};

struct RegressionFlags {
  std::string label;
  double step = 0.1;
  int iters = 100;
  double tol = 0.0;
};

struct ForestFlags {
  std::string label;
  std::size_t trees = 10;
  std::optional<std::size_t> k;
  std::optional<std::size_t> mtry;
  int max_depth = 0;
  std::size_t min_leaf = 1;
  std::string task = "classification";
};

struct BenchFlags {
  int iters = 10;
};

// Each returns the "result" object and fills `stats`.
Json CallsAvg(const SharedFlags& flags, RunStats& stats);
Json CallsCount(const SharedFlags& flags, RunStats& stats);
Json WordCount(const SharedFlags& flags, RunStats& stats);
Json Sample(const SharedFlags& flags, const SampleFlags& sample, RunStats& stats);
Json KMeans(const SharedFlags& flags, const KMeansFlags& kmeans, RunStats& stats);
Json LinReg(const SharedFlags& flags, const RegressionFlags& reg, RunStats& stats);
Json LogReg(const SharedFlags& flags, const RegressionFlags& reg, RunStats& stats);
Json Forest(const SharedFlags& flags, const ForestFlags& forest, RunStats& stats);
Json BenchIo(const SharedFlags& flags, const BenchFlags& bench, RunStats& stats);

}  // namespace mrlab::cli

#endif  // MRLAB_TOOLS_COMMANDS_H_
