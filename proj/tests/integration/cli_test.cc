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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mrlab/forest.h"
#include "support/cli_runner.h"

namespace mrlab {
namespace {

using nlohmann::json;
using testing::CliRun;
using testing::ScratchDir;

class CliTest : public ::testing::Test {
 protected:
  CliTest() : dir_("cli") {}

  CliRun Run(const std::vector<std::string>& args, const std::string& env = "") {
    return testing::RunCli(MRLAB_CLI_PATH, args, dir_, env);
  }

  std::string File(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    testing::WriteFile(path, text);
    return path.string();
  }

  std::string Range(std::size_t n) {
    std::string text = "id,value\n";
    for (std::size_t i = 0; i < n; ++i) {
      text += std::to_string(i) + "," + std::to_string(i * i % 17) + "\n";
    }
    return File("range" + std::to_string(n) + ".csv", text);
  }

  ScratchDir dir_;
};

TEST_F(CliTest, ReservoirOnThreeRowsReturnsAllRows) {
  const auto path = File("three.csv", "a,b\n1,2\n3,4\n5,6\n");
  const auto run = Run({"sample", "--method", "reservoir", "--n", "3", "--seed", "1", path});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  const auto report = json::parse(run.out);
  EXPECT_EQ(report["schema"], 1);
  auto rows = report["result"]["rows"].get<std::vector<std::string>>();
  std::sort(rows.begin(), rows.end());
  EXPECT_EQ(rows, (std::vector<std::string>{"1,2", "3,4", "5,6"}));
}

TEST_F(CliTest, EverySamplerReturnsNDistinctRows) {
  const auto path = Range(200);
  for (std::string method : {"reservoir", "sort", "scan"}) {
    const auto run = Run({"sample", "--method", method, "--n", "20", "--splits", "3",
                          "--seed", "9", path});
    ASSERT_EQ(run.exit_code, 0) << method << run.err;
    auto idx = json::parse(run.out)["result"]["indices"].get<std::vector<std::size_t>>();
    std::sort(idx.begin(), idx.end());
    EXPECT_EQ(std::unique(idx.begin(), idx.end()), idx.end());
    EXPECT_EQ(idx.size(), 20u);
  }
}

TEST_F(CliTest, BenchIoAccounting) {
  const auto path = Range(100);
  auto report = json::parse(Run({"bench-io", "--iters", "5", "--mode", "disk", path}).out);
  EXPECT_EQ(report["stats"]["records_read"], 500);
  report = json::parse(Run({"bench-io", "--iters", "5", "--mode", "memory", path}).out);
  EXPECT_EQ(report["stats"]["records_read"], 100);

  report = json::parse(Run({"bench-io", "--iters", "1", path}).out);
  EXPECT_EQ(report["result"]["modes"]["disk"]["records_read"], 100);
  EXPECT_EQ(report["result"]["modes"]["memory"]["records_read"], 100);

  report = json::parse(Run({"bench-io", "--iters", "10", "--splits", "4", path}).out);
  const auto& disk = report["result"]["modes"]["disk"];
  EXPECT_EQ(disk["records_read"], 1000);
  EXPECT_GE(disk["records_written"].get<std::uint64_t>(), 900u);
  EXPECT_EQ(report["result"]["read_ratio"], 10.0);
}

TEST_F(CliTest, LinregExactLine) {
  const auto path = File("line.csv", "x,y\n1,2\n2,4\n3,6\n4,8\n5,10\n");
  const auto run = Run({"linreg", "--splits", "2", path});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  const auto beta = json::parse(run.out)["result"]["coefficients"];
  EXPECT_NEAR(beta[0].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(beta[1].get<double>(), 2.0, 1e-12);
}

TEST_F(CliTest, LinregSingularExitsOneWithPivot) {
  const auto path = File("dup.csv", "a,b,y\n1,1,3\n2,2,1\n3,3,4\n4,4,2\n");
  const auto run = Run({"linreg", path});
  EXPECT_EQ(run.exit_code, 1);
  const auto err = json::parse(run.err)["error"];
  EXPECT_EQ(err["kind"], "singular_matrix");
  EXPECT_EQ(err["module"], "linear-models");
  EXPECT_EQ(err["details"]["column"], "b");
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  const auto path = Range(10);
  EXPECT_EQ(Run({"linreg", "--no-such-flag", path}).exit_code, 2);
  EXPECT_EQ(Run({"frobnicate", path}).exit_code, 2);
  EXPECT_EQ(Run({"linreg", (dir_ / "missing.csv").string()}).exit_code, 2);
  EXPECT_EQ(Run({"sample", "--n", "11", path}).exit_code, 2);
  EXPECT_EQ(Run({"linreg", "--label", "nope", path}).exit_code, 2);

  const auto bad = File("bad.csv", "x,y\n1,2\n2,oops\n");
  const auto run = Run({"linreg", bad});
  EXPECT_EQ(run.exit_code, 2);
  const auto err = json::parse(run.err)["error"];
  EXPECT_EQ(err["kind"], "schema");
  EXPECT_EQ(err["row"], 2);
}

TEST_F(CliTest, LogregLabelOutsideZeroOneNamesRow) {
  const auto path = File("labels.csv", "x,y\n1,0\n2,1\n3,2\n");
  const auto run = Run({"logreg", path});
  EXPECT_EQ(run.exit_code, 2);
  EXPECT_EQ(json::parse(run.err)["error"]["row"], 3);
}

TEST_F(CliTest, LogregDivergenceExitsOne) {
  const auto path = File("div.csv", "x,y\n10,0\n20,1\n-30,1\n");
  const auto run = Run({"logreg", "--step", "1e308", "--iters", "5", path});
  EXPECT_EQ(run.exit_code, 1);
  EXPECT_EQ(json::parse(run.err)["error"]["kind"], "divergence");
}

TEST_F(CliTest, ScanFailureExitsOneWithStatus) {
  const auto path = Range(1000);
  bool failed = false;
  for (int seed = 0; seed < 100 && !failed; ++seed) {
    const auto run = Run({"sample", "--method", "scan", "--n", "500", "--delta", "0.999",
                          "--seed", std::to_string(seed), path});
    if (run.exit_code == 0) continue;
    failed = true;
    EXPECT_EQ(run.exit_code, 1);
    const auto err = json::parse(run.err)["error"];
    EXPECT_EQ(err["kind"], "sampling_failure");
    EXPECT_FALSE(err["details"]["success"].get<bool>());
  }
  EXPECT_TRUE(failed);
}

TEST_F(CliTest, CallsJobs) {
  const auto path = File("calls.csv",
                         "date,caller,callee,duration\n"
                         "2024-01-01,a,b,10\n"
                         "2024-01-01,a,c,20\n"
                         "2024-01-02,b,a,5\n");
  auto run = Run({"calls-avg", "--splits", "2", path});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  auto rows = json::parse(run.out)["result"]["rows"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["date"], "2024-01-01");
  EXPECT_EQ(rows[0]["mean_duration"], 15.0);
  EXPECT_EQ(rows[1]["count"], 1);

  run = Run({"calls-count", path});
  rows = json::parse(run.out)["result"]["rows"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["caller"], "a");
  EXPECT_EQ(rows[0]["count"], 2);

  const auto bad = File("badcalls.csv", "date,caller,callee,duration\n2024-13-01,a,b,1\n");
  EXPECT_EQ(Run({"calls-avg", bad}).exit_code, 2);
}

TEST_F(CliTest, WordCount) {
  const auto path = File("docs.txt", "the cat\nthe dog the end\n");
  const auto run = Run({"wordcount", path});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  const auto tokens = json::parse(run.out)["result"]["tokens"];
  ASSERT_EQ(tokens.size(), 4u);
  EXPECT_EQ(tokens[3]["token"], "the");
  EXPECT_EQ(tokens[3]["count"], 3);
}

TEST_F(CliTest, KMeansWritesCentersAndAssignments) {
  const auto path = File("pts.csv", "x\n0\n2\n10\n12\n");
  const auto centers = (dir_ / "centers.csv").string();
  const auto assign = (dir_ / "assign.txt").string();
  const auto run = Run({"kmeans", "--k", "2", "--seed", "3", "--centers-out", centers,
                        "--assignments-out", assign, path});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  const auto text = testing::ReadFile(centers);
  EXPECT_TRUE(text == "x\n1.0\n11.0\n" || text == "x\n11.0\n1.0\n") << text;
  const auto a = testing::ReadFile(assign);
  EXPECT_TRUE(a == "0\n0\n1\n1\n" || a == "1\n1\n0\n0\n") << a;
  EXPECT_EQ(json::parse(run.out)["result"]["objective"], 4.0);
}

TEST_F(CliTest, ForestModelRoundTrips) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::string text = "x0,x1,label\n";
  for (int i = 0; i < 120; ++i) {
    const int c = i % 2;
    text += std::to_string(c * 4 + noise(gen)) + "," + std::to_string(noise(gen)) + "," +
            std::to_string(c) + "\n";
  }
  const auto path = File("blobs.csv", text);
  const auto model_path = (dir_ / "model.json").string();
  const auto run = Run({"rf", "--trees", "5", "--seed", "2", "--model-out", model_path, path});
  ASSERT_EQ(run.exit_code, 0) << run.err;
  const auto report = json::parse(run.out);
  EXPECT_GE(report["result"]["training_accuracy"].get<double>(), 0.95);
  const auto model =
      ForestFromJson(nlohmann::ordered_json::parse(testing::ReadFile(model_path)));
  EXPECT_EQ(model.trees.size(), 5u);
  EXPECT_EQ(model.num_features, 2u);
}

TEST_F(CliTest, ReportsAreByteIdenticalAcrossRunsAndExecutionModes) {
  const auto path = File("xy.csv", "a,b,y\n1,0,0\n2,1,1\n3,0,0\n4,1,1\n5,1,0\n6,0,1\n7,1,1\n");
  const std::vector<std::vector<std::string>> commands = {
      {"sample", "--method", "sort", "--n", "3", "--splits", "3", "--seed", "4", path},
      {"logreg", "--splits", "3", "--iters", "20", path},
      {"rf", "--splits", "3", "--trees", "4", "--seed", "8", path},
  };
  for (const auto& args : commands) {
    const auto first = Run(args);
    const auto second = Run(args);
    const auto sequential = Run(args, "MRLAB_SEQUENTIAL=1");
    ASSERT_EQ(first.exit_code, 0) << first.err;
    EXPECT_EQ(first.out, second.out);
    EXPECT_EQ(first.out, sequential.out);
  }
}

}  // namespace
}  // namespace mrlab
