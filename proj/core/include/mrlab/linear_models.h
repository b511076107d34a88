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

#ifndef MRLAB_LINEAR_MODELS_H_
#define MRLAB_LINEAR_MODELS_H_

// Linear regression through a MapReduce computation of X'X and X'y followed
// by an in-memory normal-equations solve, and logistic regression by
// MapReduce gradient descent.

#include <cstddef>
#include <span>
#include <vector>

#include "mrlab/data.h"
#include "mrlab/engine.h"

namespace mrlab {

// n x (p+1) design matrix whose first column is all ones, with labels.
// Rows are stored as LabeledRow records whose features include the 1.
class DataMatrix {
 public:
  // Prepends the intercept column to every row.
  static DataMatrix WithIntercept(std::vector<LabeledRow> rows);
  // Rows are taken as-is; the first column must already be all ones.
  static DataMatrix FromDesign(std::vector<LabeledRow> rows);

  std::size_t rows() const { return records_.size(); }
  std::size_t cols() const { return cols_; }
  const std::vector<LabeledRow>& records() const { return records_; }

 private:
  DataMatrix(std::vector<LabeledRow> records, std::size_t cols)
      : records_(std::move(records)), cols_(cols) {}

  std::vector<LabeledRow> records_;
  std::size_t cols_ = 0;
};

struct GramPair {
  std::size_t dim = 0;
  std::vector<double> xtx;  // dim x dim, row-major
  std::vector<double> xty;  // dim

  double XtX(std::size_t i, std::size_t j) const { return xtx[i * dim + j]; }
};

struct LinearModel {
  std::vector<double> beta;
  // Gradient-descent rounds run; 0 for the direct solve.
  int iterations = 0;
  // Linear: ||X'X beta - X'y||_inf. Logistic: ||grad NLL / n||_inf at the
  // last evaluated iterate.
  double residual_norm = 0.0;
};

// One MapReduce round. Map emits x_i x_i' and x_i y_i per record, the
// combiner folds them into per-split partials, reduce sums the partials in
// split order.
JobSpec<LabeledRow> GramJob(std::size_t dim);

struct GramResult {
  GramPair gram;
  RunStats stats;
};
GramResult ComputeGram(const DataMatrix& data, const ClusterConfig& config);

// Cholesky solve of X'X beta = X'y. Throws SingularMatrixError when a pivot
// falls below 1e-12 of its diagonal entry.
std::vector<double> SolveNormalEquations(const GramPair& gram);

struct LinearFit {
  LinearModel model;
  RunStats stats;
};
LinearFit FitLinear(const DataMatrix& data, const ClusterConfig& config);

// Overflow-free logistic function.
double Sigmoid(double z);
// log(1 + e^z), overflow-free.
double Softplus(double z);

// One MapReduce round producing the gradient of the negative
// log-likelihood, sum_i (sigmoid(x_i'beta) - y_i) x_i, and the NLL itself.
JobSpec<LabeledRow> LogisticGradientJob(std::vector<double> beta);

struct GradientResult {
  std::vector<double> gradient;
  double nll = 0.0;
  RunStats stats;
};
GradientResult ComputeLogisticGradient(const DataMatrix& data,
                                       std::span<const double> beta,
                                       const ClusterConfig& config);

struct LogisticOptions {
  double step_size = 0.1;
  int max_iters = 100;
  // Stop once ||grad / n||_inf < tol. Zero disables the check, leaving the
  // fixed iteration count as the only stopping rule.
  double tol = 0.0;
  // Starting point; zeros when empty.
  std::vector<double> initial_beta;
};

struct LogisticFit {
  LinearModel model;
  // beta after each round, trajectory[t] = beta_{t+1}.
  std::vector<std::vector<double>> trajectory;
  // NLL at the iterate each round started from.
  std::vector<double> nll_trace;
  RunStats stats;
};

// beta_{t+1} = beta_t - step_size * grad NLL(beta_t) / n.
LogisticFit FitLogistic(const DataMatrix& data, const LogisticOptions& options,
                        const ClusterConfig& config);

}  // namespace mrlab

#endif  // MRLAB_LINEAR_MODELS_H_
