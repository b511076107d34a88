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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "mrlab/agg_jobs.h"
#include "mrlab/codec.h"
#include "mrlab/csv.h"
#include "mrlab/data.h"
#include "mrlab/errors.h"
#include "mrlab/forest.h"
#include "mrlab/kmeans.h"
#include "mrlab/linear_models.h"
#include "mrlab/sampling.h"

namespace mrlab::cli {
namespace {

CsvTable LoadTable(const std::string& path) {
  CsvTable table = ReadCsvFile(path);
  if (table.rows.empty()) throw EmptyInputError("'" + path + "' has no data rows");
  return table;
}

std::size_t LabelColumn(const NumericTable& table, const std::string& label) {
  if (table.header.size() < 1) throw ParameterError("--label: table has no columns");
  if (label.empty()) return table.header.size() - 1;
  const auto it = std::find(table.header.begin(), table.header.end(), label);
  if (it == table.header.end()) {
    throw ParameterError("--label: no column named '" + label + "'");
  }
  return static_cast<std::size_t>(it - table.header.begin());
}

std::vector<std::string> FeatureNames(const NumericTable& table, std::size_t label) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c != label) names.push_back(table.header[c]);
  }
  return names;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  return out;
}

void AddSequenceBytes(RunStats& stats, std::span<const std::string> lines) {
  for (const auto& line : lines) stats.bytes_read += line.size();
}

}  // namespace

ClusterConfig SharedFlags::Config() const {
  ClusterConfig config;
  config.num_splits = splits;
  config.iteration_mode = ParseIterationMode(mode);
  config.seed = seed;
  config.execution = ExecutionFromEnvironment();
  return config;
}

Json CallsAvg(const SharedFlags& flags, RunStats& stats) {
  const auto records = ParseCallRecords(LoadTable(flags.input));
  const auto result = AvgDurationByDate(records, flags.Config());
  stats = result.stats;
  Json rows = Json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"date", r.date}, {"mean_duration", r.mean}, {"count", r.count}});
  }
  return {{"rows", std::move(rows)}};
}

Json CallsCount(const SharedFlags& flags, RunStats& stats) {
  const auto records = ParseCallRecords(LoadTable(flags.input));
  const auto result = CallsPerDateNumber(records, flags.Config());
  stats = result.stats;
  Json rows = Json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"date", r.date}, {"caller", r.caller}, {"count", r.count}});
  }
  return {{"rows", std::move(rows)}};
}

Json WordCount(const SharedFlags& flags, RunStats& stats) {
  std::ifstream in(flags.input, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + flags.input + "'");
  std::vector<std::string> documents;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    documents.push_back(std::move(line));
  }
  if (documents.empty()) throw EmptyInputError("'" + flags.input + "' is empty");
  const auto result = mrlab::WordCount(documents, flags.Config());
  stats = result.stats;
  Json counts = Json::array();
  for (const auto& t : result.rows) counts.push_back({{"token", t.token}, {"count", t.count}});
  return {{"documents", documents.size()}, {"tokens", std::move(counts)}};
}

Json Sample(const SharedFlags& flags, const SampleFlags& sample, RunStats& stats) {
  const CsvTable table = LoadTable(flags.input);
  const std::size_t population = table.lines.size();
  const ClusterConfig config = flags.Config();
  Json result = {{"method", sample.method}, {"n", sample.n}, {"population", population}};
  std::vector<std::size_t> indices;
  if (sample.method == "reservoir") {
    if (sample.n < 1 || sample.n > population) {
      throw ParameterError("--n: need 1 <= n <= " + std::to_string(population));
    }
    std::vector<std::size_t> all(population);
    std::iota(all.begin(), all.end(), std::size_t{0});
    indices = ReservoirSample<std::size_t>(all, sample.n, config.seed);
    stats.records_read = population;
    AddSequenceBytes(stats, table.lines);
  } else if (sample.method == "sort") {
    auto r = SortSample<std::string>(table.lines, sample.n, config);
    indices = std::move(r.indices);
    stats = r.stats;
  } else if (sample.method == "scan") {
    auto r = ScanSrs<std::string>(table.lines, sample.n, sample.delta, config);
    stats = r.stats;
    Json scan = {{"delta", sample.delta},
                 {"status", ToString(r.status)},
                 {"success", r.ok()},
                 {"accept_threshold", r.thresholds.accept},
                 {"waitlist_threshold", r.thresholds.waitlist},
                 {"accepted", r.accepted},
                 {"waitlisted", r.waitlisted},
                 {"candidates", r.candidates()}};
    if (!r.ok()) {
      throw AlgorithmError("sampling_failure",
                           std::string("scan sampling failed: ") + ToString(r.status),
                           scan);
    }
    result["scan"] = std::move(scan);
    indices = std::move(r.indices);
  } else {
    throw ParameterError("--method: expected reservoir, sort or scan");
  }
  Json rows = Json::array();
  for (std::size_t i : indices) rows.push_back(table.lines[i]);
  result["header"] = table.header;
  result["indices"] = indices;
  result["rows"] = std::move(rows);
  return result;
}

Json KMeans(const SharedFlags& flags, const KMeansFlags& kmeans, RunStats& stats) {
  const NumericTable table = ToNumeric(LoadTable(flags.input));
  KMeansOptions options;
  options.k = kmeans.k;
  options.max_iters = kmeans.iters;
  options.tol = kmeans.tol;
  const auto fit = FitKMeans(table.rows, options, flags.Config());
  stats = fit.stats;

  if (!kmeans.centers_out.empty()) {
    auto out = OpenOutput(kmeans.centers_out);
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      out << (c ? "," : "") << table.header[c];
    }
    out << '\n';
    for (const auto& center : fit.centers.centers) {
      for (std::size_t c = 0; c < center.size(); ++c) {
        out << (c ? "," : "") << Json(center[c]).dump();
      }
      out << '\n';
    }
  }
  if (!kmeans.assignments_out.empty()) {
    auto out = OpenOutput(kmeans.assignments_out);
    for (std::size_t a : fit.assignments) out << a << '\n';
  }

  std::vector<std::size_t> sizes(fit.centers.centers.size(), 0);
  for (std::size_t a : fit.assignments) ++sizes[a];
  Json sse = Json::array();
  for (const auto& round : fit.history) sse.push_back(round.objective);
  return {{"k", kmeans.k},
          {"iterations", fit.centers.iteration},
          {"stopped_early", fit.centers.iteration < kmeans.iters},
          {"objective", fit.centers.objective},
          {"objective_trace", std::move(sse)},
          {"columns", table.header},
          {"centers", fit.centers.centers},
          {"cluster_sizes", sizes}};
}

Json LinReg(const SharedFlags& flags, const RegressionFlags& reg, RunStats& stats) {
  const NumericTable table = ToNumeric(LoadTable(flags.input));
  const std::size_t label = LabelColumn(table, reg.label);
  std::vector<std::string> columns = {"intercept"};
  for (auto& name : FeatureNames(table, label)) columns.push_back(std::move(name));
  LinearFit fit;
  try {
    fit = FitLinear(DataMatrix::WithIntercept(ToLabeledRows(table, label)), flags.Config());
  } catch (const SingularMatrixError& e) {
    throw AlgorithmError("singular_matrix", e.what(),
                         {{"pivot_index", e.pivot_index()},
                          {"column", columns[e.pivot_index()]}});
  }
  stats = fit.stats;
  return {{"label", table.header[label]},
          {"columns", columns},
          {"coefficients", fit.model.beta},
          {"residual_norm", fit.model.residual_norm}};
}

Json LogReg(const SharedFlags& flags, const RegressionFlags& reg, RunStats& stats) {
  const NumericTable table = ToNumeric(LoadTable(flags.input));
  const std::size_t label = LabelColumn(table, reg.label);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double y = table.rows[r][label];
    if (y != 0.0 && y != 1.0) {
      throw ParseError("label '" + table.header[label] + "' must be 0 or 1", r + 1);
    }
  }
  std::vector<std::string> columns = {"intercept"};
  for (auto& name : FeatureNames(table, label)) columns.push_back(std::move(name));
  const auto data = DataMatrix::WithIntercept(ToLabeledRows(table, label));
  LogisticFit fit;
  try {
    fit = FitLogistic(data, {reg.step, reg.iters, reg.tol, {}}, flags.Config());
  } catch (const DivergenceError& e) {
    throw AlgorithmError("divergence", e.what(), {{"iteration", e.iteration()}});
  }
  stats = fit.stats;
  std::size_t correct = 0;
  for (const auto& row : data.records()) {
    double z = 0.0;
    for (std::size_t j = 0; j < row.features.size(); ++j) z += row.features[j] * fit.model.beta[j];
    correct += (Sigmoid(z) >= 0.5) == (row.label == 1.0);
  }
  return {{"label", table.header[label]},
          {"columns", columns},
          {"coefficients", fit.model.beta},
          {"iterations", fit.model.iterations},
          {"gradient_norm", fit.model.residual_norm},
          {"nll_trace", fit.nll_trace},
          {"training_accuracy",
           static_cast<double>(correct) / static_cast<double>(data.rows())}};
}

Json Forest(const SharedFlags& flags, const ForestFlags& forest, RunStats& stats) {
  const NumericTable table = ToNumeric(LoadTable(flags.input));
  const std::size_t label = LabelColumn(table, forest.label);
  const auto rows = ToLabeledRows(table, label);
  const std::size_t p = table.header.size() - 1;
  if (p == 0) throw ParameterError("rf: need at least one feature column");

  ForestParams params;
  params.task = ParseTaskKind(forest.task);
  params.trees = forest.trees;
  params.sample_size = forest.k.value_or(rows.size());
  const std::size_t default_mtry =
      params.task == TaskKind::kClassification
          ? static_cast<std::size_t>(std::sqrt(static_cast<double>(p)))
          : p / 3;
  params.mtry = forest.mtry.value_or(std::max<std::size_t>(1, default_mtry));
  params.max_depth = forest.max_depth;
  params.min_leaf = forest.min_leaf;
  params.seed = flags.seed;

  const auto fit = FitForest(rows, params, flags.Config());
  stats = fit.stats;
  std::size_t degenerate = 0;
  for (const auto& tree : fit.model.trees) degenerate += tree.degenerate;

  Json result = {{"label", table.header[label]},
                 {"features", FeatureNames(table, label)},
                 {"task", ToString(params.task)},
                 {"trees", params.trees},
                 {"k", params.sample_size},
                 {"mtry", params.mtry},
                 {"max_depth", params.max_depth},
                 {"min_leaf", params.min_leaf},
                 {"degenerate_trees", degenerate},
                 {"expected_excluded_fraction",
                  std::exp(-static_cast<double>(params.sample_size) *
                           static_cast<double>(params.trees) /
                           static_cast<double>(rows.size()))}};
  double metric = 0.0;
  for (const auto& row : rows) {
    const double yhat = PredictForest(fit.model, row.features);
    metric += params.task == TaskKind::kClassification
                  ? static_cast<double>(yhat == row.label)
                  : (yhat - row.label) * (yhat - row.label);
  }
  metric /= static_cast<double>(rows.size());
  result[params.task == TaskKind::kClassification ? "training_accuracy" : "training_mse"] =
      metric;
  result["model"] = ToJson(fit.model);
  return result;
}

Json BenchIo(const SharedFlags& flags, const BenchFlags& bench, RunStats& stats) {
  const CsvTable table = LoadTable(flags.input);
  const std::vector<std::string>& records = table.lines;
  if (bench.iters < 1) throw ParameterError("--iters must be >= 1");

  // Identity round: every record goes through map, shuffle and reduce.
  IterativeJob<std::string, int> job;
  job.make_job = [](int, const int&) {
    JobSpec<std::string> spec;
    spec.mapper = [](const std::string& line, MapContext& ctx, Emitter& out) {
      out.Emit(KeyBuilder().AddU64(ctx.record_index).bytes(), line);
    };
    spec.reducer = [](std::string_view key, std::span<const std::string> values,
                      Emitter& out) {
      for (const auto& v : values) out.Emit(std::string(key), v);
    };
    return spec;
  };
  job.update = [](int, const int& rounds, std::vector<KeyValue>) { return rounds + 1; };

  std::vector<std::string> modes;
  if (flags.mode == "both") {
    modes = {"disk", "memory"};
  } else {
    modes = {ToString(ParseIterationMode(flags.mode))};
  }
  Json per_mode = Json::object();
  std::vector<RunStats> runs;
  for (const auto& mode : modes) {
    SharedFlags mode_flags = flags;
    mode_flags.mode = mode;
    const auto run = RunIterative(job, 0, bench.iters, records, mode_flags.Config());
    per_mode[mode] = ToJson(run.stats);
    stats += run.stats;
    runs.push_back(run.stats);
  }
  Json result = {{"records", records.size()}, {"iters", bench.iters}, {"modes", per_mode}};
  if (runs.size() == 2) {
    result["read_ratio"] = static_cast<double>(runs[0].records_read) /
                           static_cast<double>(runs[1].records_read);
    result["write_ratio"] = static_cast<double>(runs[0].records_written) /
                            static_cast<double>(runs[1].records_written);
  }
  return result;
}

}  // namespace mrlab::cli
