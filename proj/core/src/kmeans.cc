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

#include "mrlab/kmeans.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrlab/codec.h"
#include "mrlab/errors.h"
#include "mrlab/sampling.h"

namespace mrlab {
namespace {

constexpr std::string_view kClusterTag = "c";
constexpr std::string_view kAssignTag = "a";

void CheckDims(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ParameterError("dimension mismatch: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
}

}  // namespace

double SquaredEuclidean(std::span<const double> a, std::span<const double> b) {
  CheckDims(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

Assignment Assign(std::span<const double> point, const CenterSet& centers,
                  const Metric& metric) {
  if (centers.centers.empty()) throw ParameterError("no centers to assign to");
  Assignment best{0, 0.0};
  for (std::size_t c = 0; c < centers.centers.size(); ++c) {
    CheckDims(point, centers.centers[c]);
    const double d = metric(point, centers.centers[c]);
    if (c == 0 || d < best.distance) best = {c, d};
  }
  return best;
}

CenterSet Recompute(std::span<const ClusterMembers> groups,
                    const CenterSet& previous) {
  CenterSet next = previous;
  for (const ClusterMembers& g : groups) {
    if (g.members.empty()) continue;
    if (g.cluster >= next.centers.size()) {
      throw ParameterError("cluster index out of range");
    }
    Point sum(next.centers[g.cluster].size(), 0.0);
    for (const Point& m : g.members) {
      CheckDims(m, sum);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += m[i];
    }
    for (double& v : sum) v /= static_cast<double>(g.members.size());
    next.centers[g.cluster] = std::move(sum);
  }
  return next;
}

std::vector<Point> SampleInitialCenters(std::span<const Point> data,
                                        std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > data.size()) throw ParameterError("need 1 <= k <= n");
  std::vector<std::size_t> indices(data.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  std::vector<std::size_t> chosen =
      ReservoirSample<std::size_t>(indices, k, seed);
  std::vector<Point> centers;
  centers.reserve(k);
  for (std::size_t i : chosen) centers.push_back(data[i]);
  return centers;
}

JobSpec<Point> KMeansRoundJob(CenterSet centers, Metric metric) {
  JobSpec<Point> job;
  job.mapper = [centers = std::move(centers), metric = std::move(metric)](
                   const Point& point, MapContext& ctx, Emitter& out) {
    const Assignment a = Assign(point, centers, metric);
    Point packed(point);
    packed.push_back(a.distance);
    out.Emit(KeyBuilder().Add(kClusterTag).AddU64(a.index).bytes(),
             EncodeVector(packed));
    out.Emit(KeyBuilder().Add(kAssignTag).AddU64(ctx.record_index).bytes(),
             EncodeCount(a.index));
  };
  job.reducer = [](std::string_view key, std::span<const std::string> values,
                   Emitter& out) {
    KeyReader reader(key);
    if (reader.String() == kAssignTag) {
      for (const auto& v : values) out.Emit(std::string(key), v);
      return;
    }
    std::vector<double> sum;
    for (const auto& v : values) {
      const std::vector<double> packed = DecodeVector(v);
      if (sum.empty()) sum.assign(packed.size(), 0.0);
      for (std::size_t i = 0; i < packed.size(); ++i) sum[i] += packed[i];
    }
    // [coordinate sums..., sse] -> [means..., count, sse]
    const double count = static_cast<double>(values.size());
    const double sse = sum.back();
    sum.pop_back();
    for (double& v : sum) v /= count;
    sum.push_back(count);
    sum.push_back(sse);
    out.Emit(std::string(key), EncodeVector(sum));
  };
  return job;
}

KMeansFit FitKMeans(std::span<const Point> data, const KMeansOptions& options,
                    const ClusterConfig& config) {
  if (options.k < 1 || options.k > data.size()) {
    throw ParameterError("k-means: need 1 <= k <= n (k=" +
                         std::to_string(options.k) +
                         ", n=" + std::to_string(data.size()) + ")");
  }
  if (options.max_iters < 1) throw ParameterError("max_iters must be >= 1");
  if (!options.metric) throw ParameterError("k-means: metric is required");

  CenterSet initial;
  initial.centers = options.initial_centers.empty()
                        ? SampleInitialCenters(data, options.k, config.seed)
                        : options.initial_centers;
  if (initial.centers.size() != options.k) {
    throw ParameterError("k-means: initial center count differs from k");
  }
  for (const Point& c : initial.centers) CheckDims(c, data.front());

  KMeansFit fit;
  IterativeJob<Point, CenterSet> iterative;
  iterative.make_job = [&](int, const CenterSet& centers) {
    return KMeansRoundJob(centers, options.metric);
  };
  iterative.update = [&](int t, const CenterSet& previous,
                         std::vector<KeyValue> output) {
    CenterSet next = previous;
    next.iteration = t + 1;
    next.objective = 0.0;
    KMeansIteration round;
    round.assignments.reserve(data.size());
    for (const KeyValue& kv : output) {
      KeyReader key(kv.key);
      const std::string_view tag = key.String();
      const std::uint64_t id = key.U64();
      if (tag == kAssignTag) {
        round.assignments.push_back(DecodeCount(kv.value));
        continue;
      }
      std::vector<double> packed = DecodeVector(kv.value);
      next.objective += packed.back();
      packed.resize(packed.size() - 2);
      next.centers[id] = std::move(packed);
    }
    round.centers = next.centers;
    round.objective = next.objective;
    fit.history.push_back(std::move(round));
    return next;
  };
  iterative.converged = [tol = options.tol](const CenterSet& previous,
                                            const CenterSet& next) {
    double shift = 0.0;
    for (std::size_t c = 0; c < next.centers.size(); ++c) {
      for (std::size_t i = 0; i < next.centers[c].size(); ++i) {
        shift = std::max(
            shift, std::fabs(next.centers[c][i] - previous.centers[c][i]));
      }
    }
    return shift < tol;
  };

  auto run = RunIterative(iterative, std::move(initial), options.max_iters,
                          data, config);
  fit.centers = std::move(run.state);
  fit.assignments = fit.history.back().assignments;
  fit.stats = run.stats;
  return fit;
}

}  // namespace mrlab
