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

#include "mrlab/forest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "mrlab/codec.h"
#include "mrlab/errors.h"

namespace mrlab {
namespace {

constexpr std::uint64_t kTrainSalt = 0x74726565'67726f77ULL;

bool Better(double candidate, const SplitChoice& best) {
  if (best.feature < 0) return true;
  return candidate < best.impurity - 1e-12 * std::max(1.0, std::fabs(best.impurity));
}

std::size_t ArgMax(std::span<const double> counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

std::size_t ClassOf(double label) { return static_cast<std::size_t>(label); }

}  // namespace

const char* ToString(TaskKind task) {
  return task == TaskKind::kClassification ? "classification" : "regression";
}

TaskKind ParseTaskKind(std::string_view text) {
  if (text == "classification") return TaskKind::kClassification;
  if (text == "regression") return TaskKind::kRegression;
  throw ParameterError("unknown task '" + std::string(text) + "'");
}

double TreeModel::Predict(std::span<const double> x) const {
  if (nodes.empty()) throw ParameterError("empty tree");
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& node = nodes[i];
    if (static_cast<std::size_t>(node.feature) >= x.size()) {
      throw ParameterError("feature index beyond input width");
    }
    i = static_cast<std::size_t>(x[node.feature] <= node.threshold ? node.left
                                                                   : node.right);
  }
  return nodes[i].value;
}

int TreeModel::Depth() const {
  if (nodes.empty()) return 0;
  int deepest = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, depth] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, depth);
    if (!nodes[i].is_leaf()) {
      stack.push_back({nodes[i].left, depth + 1});
      stack.push_back({nodes[i].right, depth + 1});
    }
  }
  return deepest;
}

nlohmann::ordered_json ToJson(const TreeModel& tree) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const TreeNode& n : tree.nodes) {
    nlohmann::ordered_json j;
    if (n.is_leaf()) {
      j["leaf"] = n.value;
      if (!n.class_counts.empty()) j["counts"] = n.class_counts;
    } else {
      j["feature"] = n.feature;
      j["threshold"] = n.threshold;
      j["left"] = n.left;
      j["right"] = n.right;
    }
    j["samples"] = n.samples;
    nodes.push_back(std::move(j));
  }
  nlohmann::ordered_json j;
  j["tree_id"] = tree.tree_id;
  j["sample_size"] = tree.sample_size;
  j["degenerate"] = tree.degenerate;
  j["nodes"] = std::move(nodes);
  return j;
}

TreeModel TreeFromJson(const nlohmann::ordered_json& json) {
  TreeModel tree;
  tree.tree_id = json.at("tree_id").get<std::uint64_t>();
  tree.sample_size = json.at("sample_size").get<std::size_t>();
  tree.degenerate = json.at("degenerate").get<bool>();
  for (const auto& j : json.at("nodes")) {
    TreeNode n;
    if (j.contains("leaf")) {
      n.value = j.at("leaf").get<double>();
      if (j.contains("counts")) {
        n.class_counts = j.at("counts").get<std::vector<double>>();
      }
    } else {
      n.feature = j.at("feature").get<int>();
      n.threshold = j.at("threshold").get<double>();
      n.left = j.at("left").get<int>();
      n.right = j.at("right").get<int>();
    }
    n.samples = j.at("samples").get<std::size_t>();
    tree.nodes.push_back(std::move(n));
  }
  const int count = static_cast<int>(tree.nodes.size());
  for (const TreeNode& n : tree.nodes) {
    if (!n.is_leaf() && (n.left <= 0 || n.left >= count || n.right <= 0 ||
                         n.right >= count)) {
      throw ParseError("tree node child index out of range");
    }
  }
  if (tree.nodes.empty()) throw ParseError("tree has no nodes");
  return tree;
}

nlohmann::ordered_json ToJson(const ForestModel& model) {
  nlohmann::ordered_json j;
  j["task"] = ToString(model.task);
  j["num_features"] = model.num_features;
  j["num_classes"] = model.num_classes;
  j["trees"] = nlohmann::ordered_json::array();
  for (const TreeModel& t : model.trees) j["trees"].push_back(ToJson(t));
  return j;
}

ForestModel ForestFromJson(const nlohmann::ordered_json& json) {
  ForestModel model;
  model.task = ParseTaskKind(json.at("task").get<std::string>());
  model.num_features = json.at("num_features").get<std::size_t>();
  model.num_classes = json.at("num_classes").get<std::size_t>();
  for (const auto& t : json.at("trees")) model.trees.push_back(TreeFromJson(t));
  return model;
}

std::vector<std::uint64_t> ResampleCounts(std::size_t record_index,
                                          std::size_t n,
                                          const ForestParams& params) {
  const double rate =
      static_cast<double>(params.sample_size) / static_cast<double>(n);
  std::vector<std::uint64_t> counts(params.trees);
  for (std::size_t j = 0; j < params.trees; ++j) {
    Rng rng(DeriveSeed(params.seed, record_index, j));
    counts[j] = rng.Poisson(rate);
  }
  return counts;
}

SplitChoice FindBestSplit(std::span<const LabeledRow> rows,
                          std::span<const std::size_t> members,
                          std::span<const std::size_t> features,
                          std::size_t min_leaf, TaskKind task,
                          std::size_t num_classes) {
  SplitChoice best;
  const std::size_t m = members.size();
  if (m < 2 || m < 2 * min_leaf) return best;

  // Regression sums are taken around the node mean to limit cancellation.
  double center = 0.0;
  if (task == TaskKind::kRegression) {
    for (std::size_t i : members) center += rows[i].label;
    center /= static_cast<double>(m);
  }
  std::vector<double> total_counts(num_classes, 0.0);
  double total_sum = 0.0;
  double total_sq = 0.0;
  for (std::size_t i : members) {
    if (task == TaskKind::kClassification) {
      total_counts[ClassOf(rows[i].label)] += 1.0;
    } else {
      const double y = rows[i].label - center;
      total_sum += y;
      total_sq += y * y;
    }
  }

  std::vector<std::size_t> order(members.begin(), members.end());
  std::vector<double> left_counts(num_classes);
  for (std::size_t f : features) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return rows[a].features[f] < rows[b].features[f];
    });
    std::fill(left_counts.begin(), left_counts.end(), 0.0);
    double left_sum = 0.0;
    double left_sq = 0.0;
    for (std::size_t pos = 1; pos < m; ++pos) {
      const LabeledRow& prev = rows[order[pos - 1]];
      if (task == TaskKind::kClassification) {
        left_counts[ClassOf(prev.label)] += 1.0;
      } else {
        const double y = prev.label - center;
        left_sum += y;
        left_sq += y * y;
      }
      const double a = prev.features[f];
      const double b = rows[order[pos]].features[f];
      if (!(a < b) || pos < min_leaf || m - pos < min_leaf) continue;

      const double nl = static_cast<double>(pos);
      const double nr = static_cast<double>(m - pos);
      double impurity = 0.0;
      if (task == TaskKind::kClassification) {
        double sl = 0.0;
        double sr = 0.0;
        for (std::size_t c = 0; c < num_classes; ++c) {
          const double r = total_counts[c] - left_counts[c];
          sl += left_counts[c] * left_counts[c];
          sr += r * r;
        }
        impurity = (nl - sl / nl) + (nr - sr / nr);
      } else {
        const double rs = total_sum - left_sum;
        const double rq = total_sq - left_sq;
        impurity = (left_sq - left_sum * left_sum / nl) + (rq - rs * rs / nr);
      }
      if (Better(impurity, best)) {
        double threshold = a + (b - a) / 2.0;
        if (!(threshold < b)) threshold = a;
        best = {static_cast<int>(f), threshold, impurity};
      }
    }
  }
  return best;
}

TreeModel DegenerateTree(std::uint64_t tree_id, double fallback) {
  TreeModel tree;
  tree.tree_id = tree_id;
  tree.degenerate = true;
  TreeNode leaf;
  leaf.value = fallback;
  tree.nodes.push_back(std::move(leaf));
  return tree;
}

TreeModel TrainTree(std::uint64_t tree_id, std::span<const LabeledRow> sample,
                    const TreeOptions& options, Rng& rng) {
  if (sample.empty()) throw ParameterError("TrainTree: empty sample");
  const std::size_t p = sample.front().features.size();
  if (options.mtry < 1 || options.mtry > p) {
    throw ParameterError("mtry must lie in [1, p]");
  }
  const bool classify = options.task == TaskKind::kClassification;

  TreeModel tree;
  tree.tree_id = tree_id;
  tree.sample_size = sample.size();

  std::vector<std::size_t> pool(p);
  std::vector<std::size_t> features(options.mtry);

  std::function<int(std::vector<std::size_t>, int)> grow =
      [&](std::vector<std::size_t> members, int depth) -> int {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    TreeNode leaf;
    leaf.samples = members.size();
    bool pure = true;
    if (classify) {
      leaf.class_counts.assign(options.num_classes, 0.0);
      for (std::size_t i : members) leaf.class_counts[ClassOf(sample[i].label)] += 1.0;
      leaf.value = static_cast<double>(ArgMax(leaf.class_counts));
    } else {
      double sum = 0.0;
      for (std::size_t i : members) sum += sample[i].label;
      leaf.value = sum / static_cast<double>(members.size());
    }
    for (std::size_t i : members) {
      if (sample[i].label != sample[members.front()].label) {
        pure = false;
        break;
      }
    }
    const bool depth_capped = options.max_depth > 0 && depth >= options.max_depth;
    if (pure || depth_capped || members.size() < 2 * options.min_leaf) {
      tree.nodes[id] = std::move(leaf);
      return id;
    }

    // Partial Fisher-Yates: the first mtry slots are the drawn features.
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < options.mtry; ++i) {
      const std::size_t j = rng.UniformInt(i, p - 1);
      std::swap(pool[i], pool[j]);
    }
    std::copy_n(pool.begin(), options.mtry, features.begin());
    std::sort(features.begin(), features.end());

    const SplitChoice split =
        FindBestSplit(sample, members, features, options.min_leaf,
                      options.task, options.num_classes);
    if (split.feature < 0) {
      tree.nodes[id] = std::move(leaf);
      return id;
    }
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : members) {
      (sample[i].features[split.feature] <= split.threshold ? left : right)
          .push_back(i);
    }
    members.clear();
    members.shrink_to_fit();
    TreeNode node;
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.samples = leaf.samples;
    const int left_id = grow(std::move(left), depth + 1);
    const int right_id = grow(std::move(right), depth + 1);
    node.left = left_id;
    node.right = right_id;
    tree.nodes[id] = std::move(node);
    return id;
  };

  std::vector<std::size_t> all(sample.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  grow(std::move(all), 0);
  return tree;
}

JobSpec<LabeledRow> ForestJob(const ForestParams& params, std::size_t n,
                              std::size_t num_classes) {
  JobSpec<LabeledRow> job;
  job.mapper = [params, n](const LabeledRow& row, MapContext& ctx,
                           Emitter& out) {
    const std::vector<std::uint64_t> counts =
        ResampleCounts(ctx.record_index, n, params);
    std::string encoded;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      if (counts[j] == 0) continue;
      if (encoded.empty()) encoded = EncodeLabeledRow(row);
      const std::string key = KeyBuilder().AddU64(j).bytes();
      for (std::uint64_t c = 0; c < counts[j]; ++c) out.Emit(key, encoded);
    }
  };
  TreeOptions options{params.mtry, params.max_depth, params.min_leaf,
                      params.task, num_classes};
  job.reducer = [options, seed = params.seed](
                    std::string_view key, std::span<const std::string> values,
                    Emitter& out) {
    const std::uint64_t tree_id = KeyReader(key).U64();
    std::vector<LabeledRow> sample;
    sample.reserve(values.size());
    for (const auto& v : values) sample.push_back(DecodeLabeledRow(v));
    Rng rng(DeriveSeed(seed ^ kTrainSalt, tree_id));
    const TreeModel tree = TrainTree(tree_id, sample, options, rng);
    out.Emit(std::string(key), ToJson(tree).dump());
  };
  return job;
}

ForestFit FitForest(std::span<const LabeledRow> data,
                    const ForestParams& params, const ClusterConfig& config) {
  if (data.empty()) throw EmptyInputError("forest: empty training set");
  const std::size_t p = data.front().features.size();
  if (params.trees < 1) throw ParameterError("forest: need at least one tree");
  if (params.sample_size < 1) throw ParameterError("forest: k must be >= 1");
  if (params.mtry < 1 || params.mtry > p) {
    throw ParameterError("forest: mtry must lie in [1, " + std::to_string(p) + "]");
  }
  if (params.min_leaf < 1) throw ParameterError("forest: min_leaf must be >= 1");
  if (params.max_depth < 0) throw ParameterError("forest: max_depth must be >= 0");

  std::size_t num_classes = 0;
  std::vector<double> class_totals;
  double label_sum = 0.0;
  for (std::size_t r = 0; r < data.size(); ++r) {
    const LabeledRow& row = data[r];
    if (row.features.size() != p) {
      throw ParseError("inconsistent feature count", r + 1);
    }
    if (params.task == TaskKind::kClassification) {
      const double y = row.label;
      if (!(y >= 0.0) || y != std::floor(y) || y > 1e6) {
        throw ParseError("class label must be a small non-negative integer", r + 1);
      }
      const std::size_t c = ClassOf(y);
      if (c >= class_totals.size()) class_totals.resize(c + 1, 0.0);
      class_totals[c] += 1.0;
    } else {
      label_sum += row.label;
    }
  }
  num_classes = class_totals.size();
  const double fallback =
      params.task == TaskKind::kClassification
          ? static_cast<double>(ArgMax(class_totals))
          : label_sum / static_cast<double>(data.size());

  JobResult run = RunJob(ForestJob(params, data.size(), num_classes), data, config);

  ForestFit fit;
  fit.stats = run.stats;
  fit.model.task = params.task;
  fit.model.num_features = p;
  fit.model.num_classes = num_classes;
  fit.model.trees.resize(params.trees);
  std::vector<bool> trained(params.trees, false);
  for (const KeyValue& kv : run.output) {
    TreeModel tree = TreeFromJson(nlohmann::ordered_json::parse(kv.value));
    const std::uint64_t id = tree.tree_id;
    trained[id] = true;
    fit.model.trees[id] = std::move(tree);
  }
  for (std::size_t j = 0; j < params.trees; ++j) {
    if (!trained[j]) fit.model.trees[j] = DegenerateTree(j, fallback);
  }
  return fit;
}

double PredictForest(const ForestModel& model, std::span<const double> x) {
  if (model.trees.empty()) throw ParameterError("forest has no trees");
  if (model.task == TaskKind::kRegression) {
    double sum = 0.0;
    for (const TreeModel& t : model.trees) sum += t.Predict(x);
    return sum / static_cast<double>(model.trees.size());
  }
  std::vector<double> votes(std::max<std::size_t>(model.num_classes, 1), 0.0);
  for (const TreeModel& t : model.trees) {
    const std::size_t c = ClassOf(t.Predict(x));
    if (c >= votes.size()) votes.resize(c + 1, 0.0);
    votes[c] += 1.0;
  }
  return static_cast<double>(ArgMax(votes));
}

}  // namespace mrlab
