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

// mrlab: runs one MapReduce job family over a CSV file and prints a JSON
// run report.
//
//   mrlab <subcommand> [flags] INPUT
//
// Exit status: 0 on success, 2 on usage or input errors, 1 when the
// algorithm itself fails (singular system, divergence, sampling failure).

#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "commands.h"
#include "mrlab/errors.h"
#include "mrlab/run_stats.h"

namespace {

using mrlab::cli::Json;

struct Subcommand {
  const char* name;
  const char* module;
  const char* help;
};

constexpr Subcommand kSubcommands[] = {
    {"calls-avg", "agg-jobs", "Mean call duration per date"},
    {"calls-count", "agg-jobs", "Number of calls per (date, caller)"},
    {"wordcount", "agg-jobs", "Token counts over a text file, one document per line"},
    {"sample", "sampling", "Simple random sample of CSV rows"},
    {"kmeans", "kmeans", "Lloyd's k-means over numeric columns"},
    {"linreg", "linear-models", "Least squares via the normal equations"},
    {"logreg", "linear-models", "Logistic regression by gradient descent"},
    {"rf", "forest", "Random forest with Poisson resampling"},
    {"bench-io", "mr-engine", "Disk vs memory iteration I/O on an identity job"},
};

Json ErrorReport(const std::string& command, const std::string& module,
                 const std::string& kind, const std::string& message) {
  return {{"schema", 1},
          {"error",
           {{"command", command}, {"module", module}, {"kind", kind}, {"message", message}}}};
}

int Fail(Json report, int code) {
  std::cerr << report.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mrlab: MapReduce jobs on a simulated cluster"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  mrlab::cli::SharedFlags shared;
  mrlab::cli::SampleFlags sample;
  mrlab::cli::KMeansFlags kmeans;
  mrlab::cli::RegressionFlags reg;
  mrlab::cli::ForestFlags forest;
  mrlab::cli::BenchFlags bench;
  std::string rows_out;
  std::string model_out;
  std::string bench_mode = "both";

  std::vector<CLI::App*> subs;
  for (const auto& s : kSubcommands) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--splits", shared.splits, "Number of input splits")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", shared.seed, "Random seed");
    sub->add_option("--out", shared.out, "Write the report here instead of stdout");
    sub->add_option("input", shared.input, "Input file")->required();
    subs.push_back(sub);
  }
  for (CLI::App* sub : subs) {
    if (sub->get_name() == "bench-io") {
      sub->add_option("--mode", bench_mode, "disk, memory or both")
          ->check(CLI::IsMember({"disk", "memory", "both"}))
          ->capture_default_str();
      sub->add_option("--iters", bench.iters, "Rounds per mode")->check(CLI::PositiveNumber);
    } else {
      sub->add_option("--mode", shared.mode, "Iteration mode")
          ->check(CLI::IsMember({"disk", "memory"}));
    }
  }

  CLI::App* s = app.get_subcommand("sample");
  s->add_option("--method", sample.method)
      ->check(CLI::IsMember({"reservoir", "sort", "scan"}))
      ->capture_default_str();
  s->add_option("--n", sample.n, "Sample size")->required();
  s->add_option("--delta", sample.delta, "ScanSRS failure bound")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  s->add_option("--rows-out", rows_out, "Also write the sampled rows as CSV");

  CLI::App* k = app.get_subcommand("kmeans");
  k->add_option("--k", kmeans.k)->capture_default_str();
  k->add_option("--iters", kmeans.iters)->capture_default_str();
  k->add_option("--tol", kmeans.tol)->capture_default_str();
  k->add_option("--centers-out", kmeans.centers_out, "Centers as CSV");
  k->add_option("--assignments-out", kmeans.assignments_out, "One cluster index per line");

  for (const char* name : {"linreg", "logreg"}) {
    CLI::App* r = app.get_subcommand(name);
    r->add_option("--label", reg.label, "Response column (default: last)");
    if (std::string(name) == "logreg") {
      r->add_option("--step", reg.step)->capture_default_str();
      r->add_option("--iters", reg.iters)->capture_default_str();
      r->add_option("--tol", reg.tol, "Stop when max |grad/n| < tol; 0 disables")
          ->capture_default_str();
    }
  }

  CLI::App* f = app.get_subcommand("rf");
  f->add_option("--label", forest.label, "Response column (default: last)");
  f->add_option("--trees", forest.trees)->capture_default_str();
  f->add_option("--k", forest.k, "Expected records per tree (default: n)");
  f->add_option("--mtry", forest.mtry, "Features tried per node");
  f->add_option("--max-depth", forest.max_depth, "0 for unlimited")->capture_default_str();
  f->add_option("--min-leaf", forest.min_leaf)->capture_default_str();
  f->add_option("--task", forest.task)
      ->check(CLI::IsMember({"classification", "regression"}))
      ->capture_default_str();
  f->add_option("--model-out", model_out, "Also write the forest JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const Subcommand* chosen = nullptr;
  for (const auto& sc : kSubcommands) {
    if (app.got_subcommand(sc.name)) chosen = &sc;
  }
  const std::string command = chosen->name;
  if (command == "bench-io") shared.mode = bench_mode;

  Json echo = Json::array();
  for (int i = 1; i < argc; ++i) echo.push_back(argv[i]);

  mrlab::RunStats stats;
  Json result;
  try {
    if (command == "calls-avg") {
      result = mrlab::cli::CallsAvg(shared, stats);
    } else if (command == "calls-count") {
      result = mrlab::cli::CallsCount(shared, stats);
    } else if (command == "wordcount") {
      result = mrlab::cli::WordCount(shared, stats);
    } else if (command == "sample") {
      result = mrlab::cli::Sample(shared, sample, stats);
    } else if (command == "kmeans") {
      result = mrlab::cli::KMeans(shared, kmeans, stats);
    } else if (command == "linreg") {
      result = mrlab::cli::LinReg(shared, reg, stats);
    } else if (command == "logreg") {
      result = mrlab::cli::LogReg(shared, reg, stats);
    } else if (command == "rf") {
      result = mrlab::cli::Forest(shared, forest, stats);
    } else {
      result = mrlab::cli::BenchIo(shared, bench, stats);
    }

    if (!rows_out.empty()) {
      std::ofstream out(rows_out, std::ios::binary);
      if (!out) throw mrlab::ParameterError("cannot write '" + rows_out + "'");
      const auto& header = result["header"];
      for (std::size_t c = 0; c < header.size(); ++c) {
        out << (c ? "," : "") << header[c].get<std::string>();
      }
      out << '\n';
      for (const auto& row : result["rows"]) out << row.get<std::string>() << '\n';
    }
    if (!model_out.empty()) {
      std::ofstream out(model_out, std::ios::binary);
      if (!out) throw mrlab::ParameterError("cannot write '" + model_out + "'");
      out << result["model"].dump(2) << '\n';
    }
  } catch (const mrlab::cli::AlgorithmError& e) {
    Json report = ErrorReport(command, chosen->module, e.kind(), e.what());
    report["error"]["details"] = e.details();
    return Fail(std::move(report), 1);
  } catch (const mrlab::SingularMatrixError& e) {
    return Fail(ErrorReport(command, chosen->module, "singular_matrix", e.what()), 1);
  } catch (const mrlab::DivergenceError& e) {
    return Fail(ErrorReport(command, chosen->module, "divergence", e.what()), 1);
  } catch (const mrlab::JobError& e) {
    Json report = ErrorReport(command, chosen->module, "job_failure", e.what());
    if (e.location().record_index) report["error"]["row"] = *e.location().record_index + 1;
    return Fail(std::move(report), 1);
  } catch (const mrlab::ParseError& e) {
    Json report = ErrorReport(command, chosen->module, "schema", e.what());
    if (e.row()) report["error"]["row"] = *e.row();
    return Fail(std::move(report), 2);
  } catch (const std::invalid_argument& e) {
    return Fail(ErrorReport(command, chosen->module, "parameter", e.what()), 2);
  } catch (const std::exception& e) {
    return Fail(ErrorReport(command, chosen->module, "internal", e.what()), 1);
  }

  Json report = {{"schema", 1},
                 {"command", command},
                 {"argv", echo},
                 {"seed", shared.seed},
                 {"config",
                  {{"num_splits", shared.splits},
                   {"iteration_mode", shared.mode},
                   {"seed", shared.seed}}},
                 {"stats", mrlab::ToJson(stats)},
                 {"result", std::move(result)}};
  const std::string text = report.dump(2) + "\n";
  if (shared.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(shared.out, std::ios::binary);
    if (!out) {
      return Fail(ErrorReport(command, chosen->module, "parameter",
                              "cannot write '" + shared.out + "'"),
                  2);
    }
    out << text;
  }
  return 0;
}
