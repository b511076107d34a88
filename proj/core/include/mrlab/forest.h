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

#ifndef MRLAB_FOREST_H_
#define MRLAB_FOREST_H_

// Random forest trained in one MapReduce round. Map draws, for every
// (record, tree) pair, a Poisson(k/n) replication count and emits the
// record that many times under the tree's key; the shuffle hands each tree's
// sample to a single reducer, which grows a CART tree.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrlab/data.h"
#include "mrlab/engine.h"
#include "mrlab/rng.h"

namespace mrlab {

enum class TaskKind { kClassification, kRegression };

const char* ToString(TaskKind task);
TaskKind ParseTaskKind(std::string_view text);

struct ForestParams {
  std::size_t trees = 10;       // m
  std::size_t sample_size = 1;  // k, expected records per tree
  std::size_t mtry = 1;         // candidate features per node
  int max_depth = 0;            // 0: unlimited
  std::size_t min_leaf = 1;
  std::uint64_t seed = 0;
  TaskKind task = TaskKind::kClassification;
};

// Node of a flattened binary tree. Internal nodes send x[feature] <=
// threshold to `left`. Leaves have feature == -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Leaf prediction: class index or mean response.
  double value = 0.0;
  // Leaf class histogram (classification only).
  std::vector<double> class_counts;
  std::size_t samples = 0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeModel {
  std::uint64_t tree_id = 0;
  std::size_t sample_size = 0;
  // True when the tree got no records and predicts the global fallback.
  bool degenerate = false;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double Predict(std::span<const double> x) const;
  // Depth of the deepest leaf; the root alone has depth 0.
  int Depth() const;
  friend bool operator==(const TreeModel&, const TreeModel&) = default;
};

struct ForestModel {
  TaskKind task = TaskKind::kClassification;
  std::size_t num_features = 0;
  std::size_t num_classes = 0;  // 0 for regression
  std::vector<TreeModel> trees;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

nlohmann::ordered_json ToJson(const TreeModel& tree);
TreeModel TreeFromJson(const nlohmann::ordered_json& json);
nlohmann::ordered_json ToJson(const ForestModel& model);
ForestModel ForestFromJson(const nlohmann::ordered_json& json);

// Poisson(k/n) replication count of `record_index` for each of the m trees,
// each drawn from its own (seed, record_index, tree) stream.
std::vector<std::uint64_t> ResampleCounts(std::size_t record_index,
                                          std::size_t n,
                                          const ForestParams& params);

// Best split of a node under Gini (classification) or squared error
// (regression), searched over `features` and midpoints between sorted
// distinct values. Candidates are visited by ascending feature then
// threshold; a later candidate wins only if strictly better by more than a
// 1e-12 relative margin. Returns feature == -1 when no split leaves at
// least min_leaf records on each side.
struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child impurity, n_L*I_L + n_R*I_R
};
SplitChoice FindBestSplit(std::span<const LabeledRow> rows,
                          std::span<const std::size_t> members,
                          std::span<const std::size_t> features,
                          std::size_t min_leaf, TaskKind task,
                          std::size_t num_classes);

struct TreeOptions {
  std::size_t mtry = 1;
  int max_depth = 0;
  std::size_t min_leaf = 1;
  TaskKind task = TaskKind::kClassification;
  std::size_t num_classes = 0;
};

// Greedy CART growth on a non-empty sample. Each node draws mtry features
// without replacement from `rng`.
TreeModel TrainTree(std::uint64_t tree_id, std::span<const LabeledRow> sample,
                    const TreeOptions& options, Rng& rng);

// Single-leaf tree predicting `fallback`.
TreeModel DegenerateTree(std::uint64_t tree_id, double fallback);

// The resample-map / train-reduce job. `n` is the dataset size.
JobSpec<LabeledRow> ForestJob(const ForestParams& params, std::size_t n,
                              std::size_t num_classes);

struct ForestFit {
  ForestModel model;
  RunStats stats;
};
ForestFit FitForest(std::span<const LabeledRow> data,
                    const ForestParams& params, const ClusterConfig& config);

// Majority vote with ties to the smallest class, or the mean for
// regression.
double PredictForest(const ForestModel& model, std::span<const double> x);

}  // namespace mrlab

#endif  // MRLAB_FOREST_H_
