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

#ifndef MRLAB_KMEANS_H_
#define MRLAB_KMEANS_H_

// Lloyd's k-means as iterated MapReduce. Centers are driver state broadcast
// to every mapper; map assigns each point to its nearest center, reduce
// averages each cluster's members.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mrlab/engine.h"

namespace mrlab {

using Point = std::vector<double>;
using Metric =
    std::function<double(std::span<const double>, std::span<const double>)>;

double SquaredEuclidean(std::span<const double> a, std::span<const double> b);

struct CenterSet {
  std::vector<Point> centers;
  // Rounds completed when this set was produced.
  int iteration = 0;
  // Sum of metric distances from each point to its assigned center, for
  // the assignment made in the last round.
  double objective = 0.0;
};

struct Assignment {
  std::size_t index = 0;
  double distance = 0.0;
};

// Nearest center; ties go to the smallest index. Throws ParameterError on
// a dimension mismatch or an empty center set.
Assignment Assign(std::span<const double> point, const CenterSet& centers,
                  const Metric& metric = SquaredEuclidean);

struct ClusterMembers {
  std::size_t cluster = 0;
  std::vector<Point> members;
};

// Each listed cluster moves to the mean of its members, summed in member
// order. Clusters that are absent or have no members keep their previous
// center.
CenterSet Recompute(std::span<const ClusterMembers> groups,
                    const CenterSet& previous);

// k distinct records chosen by reservoir sampling over record indices.
std::vector<Point> SampleInitialCenters(std::span<const Point> data,
                                        std::size_t k, std::uint64_t seed);

struct KMeansOptions {
  std::size_t k = 2;
  int max_iters = 100;
  // Stop when no center moves more than tol in the max-norm.
  double tol = 1e-6;
  // Explicit starting centers; sampled from the data with the cluster seed
  // when empty.
  std::vector<Point> initial_centers;
  Metric metric = SquaredEuclidean;
};

struct KMeansIteration {
  std::vector<Point> centers;  // after the round's reduce
  std::vector<std::size_t> assignments;
  double objective = 0.0;  // against the centers the round started from
};

struct KMeansFit {
  CenterSet centers;
  std::vector<std::size_t> assignments;
  std::vector<KMeansIteration> history;
  RunStats stats;
};

// One round's job: map emits (cluster, [point..., distance]) and
// (record index, cluster); reduce emits (cluster, [mean..., count, sse])
// and passes assignments through.
JobSpec<Point> KMeansRoundJob(CenterSet centers, Metric metric);

KMeansFit FitKMeans(std::span<const Point> data, const KMeansOptions& options,
                    const ClusterConfig& config);

}  // namespace mrlab

#endif  // MRLAB_KMEANS_H_
