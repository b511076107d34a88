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

#include "mrlab/linear_models.h"

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "mrlab/errors.h"
#include "support/oracles.h"

namespace mrlab {
namespace {

std::vector<LabeledRow> Rows(const std::vector<std::vector<double>>& x,
                             const std::vector<double>& y) {
  std::vector<LabeledRow> rows;
  for (std::size_t i = 0; i < x.size(); ++i) rows.push_back({x[i], y[i]});
  return rows;
}

// y = x beta* + noise over an intercept design with p gaussian features.
std::vector<LabeledRow> SyntheticRegression(std::size_t n, std::size_t p,
                                            std::uint64_t seed,
                                            std::vector<double>* beta_star) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  beta_star->assign(p + 1, 0.0);
  for (auto& b : *beta_star) b = 3.0 * normal(gen);
  std::vector<LabeledRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    LabeledRow row;
    row.features.push_back(1.0);
    for (std::size_t j = 0; j < p; ++j) row.features.push_back(normal(gen) * (j + 1));
    row.label = 0.5 * normal(gen);
    for (std::size_t j = 0; j <= p; ++j) row.label += row.features[j] * (*beta_star)[j];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<LabeledRow> SyntheticLogistic(std::size_t n, std::size_t p,
                                          std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  std::vector<double> beta(p + 1);
  for (auto& b : beta) b = normal(gen);
  std::vector<LabeledRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    LabeledRow row;
    row.features.push_back(1.0);
    double z = beta[0];
    for (std::size_t j = 0; j < p; ++j) {
      row.features.push_back(normal(gen));
      z += beta[j + 1] * row.features.back();
    }
    row.label = unif(gen) < 1.0 / (1.0 + std::exp(-z)) ? 1.0 : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

TEST(GramJobTest, TwoByTwoMatchesDirectProduct) {
  const auto rows = Rows({{1, 2}, {1, 4}}, {1, 3});
  const auto g = ComputeGram(DataMatrix::FromDesign(rows), ClusterConfig{}).gram;
  const Eigen::MatrixXd x = testing::DesignOf(rows);
  const Eigen::MatrixXd xtx = x.transpose() * x;
  const Eigen::VectorXd xty = x.transpose() * testing::LabelsOf(rows);
  EXPECT_EQ(g.xtx, (std::vector<double>{2, 6, 6, 20}));
  EXPECT_EQ(g.xty, (std::vector<double>{4, 14}));
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(g.xty[i], xty(i));
    for (int j = 0; j < 2; ++j) EXPECT_EQ(g.XtX(i, j), xtx(i, j));
  }
}

TEST(GramJobTest, InterceptOnly) {
  const auto rows = Rows({{}, {}, {}}, {2.5, -1, 4});
  const auto g =
      ComputeGram(DataMatrix::WithIntercept(rows), ClusterConfig{}).gram;
  EXPECT_EQ(g.xtx, (std::vector<double>{3}));
  EXPECT_EQ(g.xty, (std::vector<double>{5.5}));
}

TEST(GramJobTest, SplitCountInvariantSymmetricPsd) {
  std::vector<double> beta_star;
  const auto data =
      DataMatrix::FromDesign(SyntheticRegression(3000, 4, 5, &beta_star));
  std::vector<GramPair> grams;
  for (std::size_t splits : {1, 2, 4}) {
    ClusterConfig config;
    config.num_splits = splits;
    grams.push_back(ComputeGram(data, config).gram);
  }
  for (const auto& g : grams) {
    for (std::size_t i = 0; i < g.xtx.size(); ++i) {
      EXPECT_NEAR(g.xtx[i], grams[0].xtx[i], 1e-12 * std::fabs(grams[0].xtx[i]));
    }
    for (std::size_t i = 0; i < g.dim; ++i) {
      EXPECT_NEAR(g.xty[i], grams[0].xty[i], 1e-12 * std::fabs(grams[0].xty[i]));
      for (std::size_t j = 0; j < g.dim; ++j) {
        EXPECT_NEAR(g.XtX(i, j), g.XtX(j, i), 1e-12 * std::fabs(g.XtX(i, j)));
      }
    }
    const Eigen::Map<const Eigen::MatrixXd> m(g.xtx.data(), g.dim, g.dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(GramJobTest, RowWidthMismatchIsRecordError) {
  JobSpec<LabeledRow> job = GramJob(2);
  const auto rows = Rows({{1, 2}, {1, 2, 3}}, {0, 0});
  try {
    RunJob(job, rows, ClusterConfig{});
    FAIL();
  } catch (const JobError& e) {
    EXPECT_EQ(e.location().record_index, 1u);
  }
}

TEST(SolveTest, HandSolvedSystem) {
  const GramPair g{2, {2, 6, 6, 20}, {4, 14}};
  const auto beta = SolveNormalEquations(g);
  EXPECT_NEAR(beta[0], -1.0, 1e-14);
  EXPECT_NEAR(beta[1], 1.0, 1e-14);
  // X beta reproduces y for X=[[1,2],[1,4]], y=[1,3].
  EXPECT_NEAR(beta[0] + 2 * beta[1], 1.0, 1e-14);
  EXPECT_NEAR(beta[0] + 4 * beta[1], 3.0, 1e-14);
}

TEST(SolveTest, Identity) {
  const GramPair g{3, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {4, -5, 6}};
  EXPECT_EQ(SolveNormalEquations(g), (std::vector<double>{4, -5, 6}));
}

TEST(SolveTest, DuplicatedColumnIsSingular) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> normal;
  std::vector<LabeledRow> rows;
  for (int i = 0; i < 50; ++i) {
    const double x = normal(gen);
    rows.push_back({{1.0, normal(gen), x, x}, normal(gen)});
  }
  const auto g = ComputeGram(DataMatrix::FromDesign(rows), ClusterConfig{}).gram;
  try {
    SolveNormalEquations(g);
    FAIL();
  } catch (const SingularMatrixError& e) {
    EXPECT_EQ(e.pivot_index(), 3u);
  }
}

TEST(SolveTest, ZeroColumnIsSingular) {
  const GramPair g{2, {1, 0, 0, 0}, {1, 0}};
  EXPECT_THROW(SolveNormalEquations(g), SingularMatrixError);
}

TEST(FitLinearTest, ExactLine) {
  const auto rows = Rows({{1}, {2}, {3}, {4}}, {2, 4, 6, 8});
  const auto fit = FitLinear(DataMatrix::WithIntercept(rows), ClusterConfig{});
  EXPECT_NEAR(fit.model.beta[0], 0.0, 1e-9);
  EXPECT_NEAR(fit.model.beta[1], 2.0, 1e-9);
  EXPECT_LE(fit.model.residual_norm, 1e-9);
  EXPECT_EQ(fit.stats.records_read, 4u);
}

TEST(FitLinearTest, ConstantResponseInterceptOnly) {
  const auto rows = Rows({{}, {}, {}, {}, {}}, {3.25, 3.25, 3.25, 3.25, 3.25});
  const auto fit = FitLinear(DataMatrix::WithIntercept(rows), ClusterConfig{});
  ASSERT_EQ(fit.model.beta.size(), 1u);
  EXPECT_DOUBLE_EQ(fit.model.beta[0], 3.25);
}

TEST(FitLinearTest, MatchesQrOracleWithOrthogonalResiduals) {
  std::vector<double> beta_star;
  const auto rows = SyntheticRegression(10000, 5, 11, &beta_star);
  const auto oracle = testing::LeastSquaresOracle(rows);
  ClusterConfig config;
  config.num_splits = 8;
  const auto fit = FitLinear(DataMatrix::FromDesign(rows), config);
  for (std::size_t j = 0; j < oracle.size(); ++j) {
    EXPECT_NEAR(fit.model.beta[j], oracle[j], 1e-8);
    EXPECT_NEAR(fit.model.beta[j], beta_star[j], 0.05);
  }
  const Eigen::MatrixXd x = testing::DesignOf(rows);
  const Eigen::VectorXd y = testing::LabelsOf(rows);
  const Eigen::Map<const Eigen::VectorXd> b(fit.model.beta.data(), fit.model.beta.size());
  const double ortho = (x.transpose() * (y - x * b)).cwiseAbs().maxCoeff();
  const double scale = (x.transpose() * y).cwiseAbs().maxCoeff();
  EXPECT_LE(ortho, 1e-6 * (1.0 + scale));
  EXPECT_LE(fit.model.residual_norm, 1e-8 * (1.0 + scale));
}

TEST(SigmoidTest, StableAtExtremes) {
  EXPECT_EQ(Sigmoid(0.0), 0.5);
  EXPECT_EQ(Sigmoid(1000.0), 1.0);
  EXPECT_EQ(Sigmoid(-1000.0), 0.0);
  EXPECT_GT(Sigmoid(-700.0), 0.0);
  EXPECT_NEAR(Softplus(1000.0), 1000.0, 1e-12);
  EXPECT_NEAR(Softplus(-1000.0), 0.0, 1e-300);
  EXPECT_NEAR(Softplus(0.0), std::log(2.0), 1e-15);
}

TEST(LogisticGradientTest, ZeroBetaGivesHalfMinusY) {
  const auto rows = SyntheticLogistic(200, 3, 4);
  const auto data = DataMatrix::FromDesign(rows);
  const std::vector<double> beta(4, 0.0);
  const auto g = ComputeLogisticGradient(data, beta, ClusterConfig{});
  const Eigen::MatrixXd x = testing::DesignOf(rows);
  const Eigen::VectorXd expected =
      x.transpose() * (Eigen::VectorXd::Constant(200, 0.5) - testing::LabelsOf(rows));
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(g.gradient[j], expected(j), 1e-10);
  EXPECT_NEAR(g.nll, 200 * std::log(2.0), 1e-9);
}

TEST(LogisticGradientTest, SymmetricCancellation) {
  const auto rows = Rows({{1}, {1}}, {0, 1});
  const std::vector<double> beta = {0.0};
  const auto g =
      ComputeLogisticGradient(DataMatrix::FromDesign(rows), beta, ClusterConfig{});
  EXPECT_EQ(g.gradient, (std::vector<double>{0.0}));
}

TEST(LogisticGradientTest, MatchesFiniteDifferences) {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> normal;
  for (int fixture = 0; fixture < 5; ++fixture) {
    const auto rows = SyntheticLogistic(100, 3, 100 + fixture);
    std::vector<double> beta(4);
    for (auto& b : beta) b = normal(gen);
    ClusterConfig config;
    config.num_splits = 3;
    const auto g = ComputeLogisticGradient(DataMatrix::FromDesign(rows), beta, config);
    const auto fd = testing::FiniteDifferenceGradient(rows, beta, 1e-6);
    for (std::size_t j = 0; j < beta.size(); ++j) {
      EXPECT_LE(std::fabs(g.gradient[j] - fd[j]), 1e-5 * std::max(1.0, std::fabs(fd[j])));
    }
    EXPECT_NEAR(g.nll, testing::LogisticNll(rows, beta), 1e-9 * g.nll);
  }
}

TEST(LogisticGradientTest, BadLabelIsRowIndexedError) {
  const auto rows = Rows({{1}, {1}, {1}}, {0, 2, 1});
  const std::vector<double> beta = {0.0};
  try {
    ComputeLogisticGradient(DataMatrix::FromDesign(rows), beta, ClusterConfig{});
    FAIL();
  } catch (const JobError& e) {
    EXPECT_EQ(e.location().record_index, 1u);
  }
}

TEST(FitLogisticTest, SeparatesOneDimensionalData) {
  const auto rows = Rows({{-3}, {-2}, {-1}, {-0.5}, {0.5}, {1}, {2}, {3}},
                         {0, 0, 0, 0, 1, 1, 1, 1});
  const auto data = DataMatrix::WithIntercept(rows);
  const auto fit = FitLogistic(data, {0.5, 200, 0.0, {}}, ClusterConfig{});
  EXPECT_EQ(fit.model.iterations, 200);
  int correct = 0;
  for (const auto& r : data.records()) {
    double z = 0.0;
    for (std::size_t j = 0; j < r.features.size(); ++j) z += r.features[j] * fit.model.beta[j];
    correct += (Sigmoid(z) >= 0.5) == (r.label == 1.0);
  }
  EXPECT_EQ(correct, 8);
}

TEST(FitLogisticTest, PreconditionsRejected) {
  const auto data = DataMatrix::WithIntercept(Rows({{1}, {2}}, {0, 1}));
  EXPECT_THROW(FitLogistic(data, {0.1, 0, 0.0, {}}, ClusterConfig{}), ParameterError);
  EXPECT_THROW(FitLogistic(data, {0.0, 5, 0.0, {}}, ClusterConfig{}), ParameterError);
}

TEST(FitLogisticTest, LockstepWithSingleMachineDescent) {
  const auto rows = SyntheticLogistic(500, 3, 21);
  const auto oracle = testing::GradientDescentOracle(rows, 0.8, 40);
  ClusterConfig config;
  config.num_splits = 4;
  const auto fit = FitLogistic(DataMatrix::FromDesign(rows), {0.8, 40, 0.0, {}}, config);
  ASSERT_EQ(fit.trajectory.size(), oracle.size());
  for (std::size_t t = 0; t < oracle.size(); ++t) {
    for (std::size_t j = 0; j < oracle[t].size(); ++j) {
      EXPECT_NEAR(fit.trajectory[t][j], oracle[t][j], 1e-9);
    }
  }
}

TEST(FitLogisticTest, NllNonIncreasingWithCertifiedStep) {
  const auto rows = SyntheticLogistic(400, 4, 31);
  const Eigen::MatrixXd x = testing::DesignOf(rows);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x.transpose() * x);
  const double lipschitz = eig.eigenvalues().maxCoeff() / rows.size();
  const auto fit = FitLogistic(DataMatrix::FromDesign(rows),
                               {4.0 / lipschitz, 60, 0.0, {}}, ClusterConfig{});
  for (std::size_t t = 1; t < fit.nll_trace.size(); ++t) {
    EXPECT_LE(fit.nll_trace[t], fit.nll_trace[t - 1] * (1 + 1e-12));
  }
}

TEST(FitLogisticTest, ToleranceStopsEarly) {
  const auto rows = SyntheticLogistic(300, 2, 12);
  const auto fit =
      FitLogistic(DataMatrix::FromDesign(rows), {1.0, 500, 1e-3, {}}, ClusterConfig{});
  EXPECT_LT(fit.model.iterations, 500);
  EXPECT_LT(fit.model.residual_norm, 1e-3);
}

TEST(FitLogisticTest, DivergenceReportsIteration) {
  const auto rows = Rows({{10}, {20}, {-30}}, {0, 1, 1});
  try {
    FitLogistic(DataMatrix::WithIntercept(rows), {1e308, 10, 0.0, {}}, ClusterConfig{});
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.iteration(), 0);
  }
}

TEST(FitLogisticTest, DiskModeChargesNReadsAndWritesPerIteration) {
  const auto rows = SyntheticLogistic(120, 2, 13);
  ClusterConfig config;
  config.num_splits = 3;
  const auto disk = FitLogistic(DataMatrix::FromDesign(rows), {0.5, 7, 0.0, {}}, config);
  EXPECT_EQ(disk.stats.records_read, 7u * 120u);
  EXPECT_GE(disk.stats.records_written, 7u * 120u);
  config.iteration_mode = IterationMode::kMemory;
  const auto mem = FitLogistic(DataMatrix::FromDesign(rows), {0.5, 7, 0.0, {}}, config);
  EXPECT_EQ(mem.stats.records_read, 120u);
  EXPECT_EQ(mem.model.beta, disk.model.beta);
}

}  // namespace
}  // namespace mrlab
