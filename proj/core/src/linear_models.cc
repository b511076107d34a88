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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mrlab/codec.h"
#include "mrlab/errors.h"

namespace mrlab {
namespace {

constexpr double kPivotTolerance = 1e-12;

void SumVectors(std::string_view key, std::span<const std::string> values,
                Emitter& out) {
  std::vector<double> total;
  for (const auto& v : values) {
    const std::vector<double> part = DecodeVector(v);
    if (total.empty()) {
      total.assign(part.size(), 0.0);
    } else if (part.size() != total.size()) {
      throw ParseError("partial sums of different lengths");
    }
    for (std::size_t i = 0; i < part.size(); ++i) total[i] += part[i];
  }
  out.Emit(std::string(key), EncodeVector(total));
}

void CheckWidth(const LabeledRow& row, std::size_t dim) {
  if (row.features.size() != dim) {
    throw ParameterError("row has " + std::to_string(row.features.size()) +
                         " columns, expected " + std::to_string(dim));
  }
}

double InfNorm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

std::vector<double> MatVec(const GramPair& g, std::span<const double> x) {
  std::vector<double> out(g.dim, 0.0);
  for (std::size_t i = 0; i < g.dim; ++i) {
    for (std::size_t j = 0; j < g.dim; ++j) out[i] += g.XtX(i, j) * x[j];
  }
  return out;
}

}  // namespace

SingularMatrixError::SingularMatrixError(std::size_t pivot_index, double pivot,
                                         double scale)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "X'X is singular or near-singular at pivot " << pivot_index
            << " (pivot " << pivot << ", diagonal " << scale << ")";
        return msg.str();
      }()),
      pivot_index_(pivot_index) {}

DataMatrix DataMatrix::WithIntercept(std::vector<LabeledRow> rows) {
  if (rows.empty()) throw EmptyInputError("data matrix has no rows");
  const std::size_t p = rows.front().features.size();
  for (auto& row : rows) {
    CheckWidth(row, p);
    row.features.insert(row.features.begin(), 1.0);
  }
  return DataMatrix(std::move(rows), p + 1);
}

DataMatrix DataMatrix::FromDesign(std::vector<LabeledRow> rows) {
  if (rows.empty()) throw EmptyInputError("data matrix has no rows");
  const std::size_t cols = rows.front().features.size();
  if (cols == 0) throw ParameterError("design matrix has no columns");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    CheckWidth(rows[r], cols);
    if (rows[r].features.front() != 1.0) {
      throw ParseError("first design column must be 1", r + 1);
    }
  }
  return DataMatrix(std::move(rows), cols);
}

JobSpec<LabeledRow> GramJob(std::size_t dim) {
  JobSpec<LabeledRow> job;
  job.mapper = [dim](const LabeledRow& row, MapContext&, Emitter& out) {
    CheckWidth(row, dim);
    const auto& x = row.features;
    std::vector<double> packed(dim * dim + dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) packed[i * dim + j] = x[i] * x[j];
      packed[dim * dim + i] = x[i] * row.label;
    }
    out.Emit("gram", EncodeVector(packed));
  };
  job.combiner = SumVectors;
  job.reducer = SumVectors;
  return job;
}

GramResult ComputeGram(const DataMatrix& data, const ClusterConfig& config) {
  const std::size_t dim = data.cols();
  JobResult run = RunJob(GramJob(dim), data.records(), config);
  const std::vector<double> packed = DecodeVector(run.output.at(0).value);
  GramResult result;
  result.stats = run.stats;
  result.gram.dim = dim;
  result.gram.xtx.assign(packed.begin(), packed.begin() + dim * dim);
  result.gram.xty.assign(packed.begin() + dim * dim, packed.end());
  return result;
}

std::vector<double> SolveNormalEquations(const GramPair& gram) {
  const std::size_t d = gram.dim;
  if (d == 0 || gram.xtx.size() != d * d || gram.xty.size() != d) {
    throw ParameterError("malformed GramPair");
  }
  // Lower-triangular Cholesky factor, row-major.
  std::vector<double> chol(d * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double pivot = gram.XtX(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= chol[j * d + k] * chol[j * d + k];
    const double scale = gram.XtX(j, j);
    if (!(scale > 0.0) || !(pivot > kPivotTolerance * scale)) {
      throw SingularMatrixError(j, pivot, scale);
    }
    const double root = std::sqrt(pivot);
    chol[j * d + j] = root;
    for (std::size_t i = j + 1; i < d; ++i) {
      double v = gram.XtX(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= chol[i * d + k] * chol[j * d + k];
      chol[i * d + j] = v / root;
    }
  }
  auto solve = [&](std::span<const double> rhs) {
    std::vector<double> z(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < i; ++k) z[i] -= chol[i * d + k] * z[k];
      z[i] /= chol[i * d + i];
    }
    for (std::size_t i = d; i-- > 0;) {
      for (std::size_t k = i + 1; k < d; ++k) z[i] -= chol[k * d + i] * z[k];
      z[i] /= chol[i * d + i];
    }
    return z;
  };
  std::vector<double> beta = solve(gram.xty);
  // One step of iterative refinement.
  std::vector<double> residual = MatVec(gram, beta);
  for (std::size_t i = 0; i < d; ++i) residual[i] = gram.xty[i] - residual[i];
  const std::vector<double> correction = solve(residual);
  for (std::size_t i = 0; i < d; ++i) beta[i] += correction[i];
  return beta;
}

LinearFit FitLinear(const DataMatrix& data, const ClusterConfig& config) {
  GramResult g = ComputeGram(data, config);
  LinearFit fit;
  fit.stats = g.stats;
  fit.model.beta = SolveNormalEquations(g.gram);
  std::vector<double> residual = MatVec(g.gram, fit.model.beta);
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= g.gram.xty[i];
  fit.model.residual_norm = InfNorm(residual);
  return fit;
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

JobSpec<LabeledRow> LogisticGradientJob(std::vector<double> beta) {
  JobSpec<LabeledRow> job;
  job.mapper = [beta = std::move(beta)](const LabeledRow& row, MapContext&,
                                        Emitter& out) {
    const std::size_t dim = beta.size();
    CheckWidth(row, dim);
    if (row.label != 0.0 && row.label != 1.0) {
      throw ParameterError("label must be 0 or 1");
    }
    double z = 0.0;
    for (std::size_t i = 0; i < dim; ++i) z += row.features[i] * beta[i];
    const double residual = Sigmoid(z) - row.label;
    // [gradient contribution..., nll contribution]
    std::vector<double> packed(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) packed[i] = residual * row.features[i];
    packed[dim] = Softplus(z) - row.label * z;
    out.Emit("gradient", EncodeVector(packed));
  };
  job.combiner = SumVectors;
  job.reducer = SumVectors;
  return job;
}

namespace {

GradientResult UnpackGradient(JobResult run) {
  std::vector<double> packed = DecodeVector(run.output.at(0).value);
  GradientResult result;
  result.nll = packed.back();
  packed.pop_back();
  result.gradient = std::move(packed);
  result.stats = run.stats;
  return result;
}

}  // namespace

GradientResult ComputeLogisticGradient(const DataMatrix& data,
                                       std::span<const double> beta,
                                       const ClusterConfig& config) {
  if (beta.size() != data.cols()) {
    throw ParameterError("beta length does not match the design width");
  }
  return UnpackGradient(RunJob(
      LogisticGradientJob({beta.begin(), beta.end()}), data.records(), config));
}

LogisticFit FitLogistic(const DataMatrix& data, const LogisticOptions& options,
                        const ClusterConfig& config) {
  if (!(options.step_size > 0.0)) throw ParameterError("step_size must be > 0");
  if (options.max_iters < 1) throw ParameterError("max_iters must be >= 1");
  if (options.tol < 0.0) throw ParameterError("tol must be >= 0");

  struct State {
    std::vector<double> beta;
    double gradient_norm = 0.0;
  };
  State initial;
  initial.beta = options.initial_beta.empty()
                     ? std::vector<double>(data.cols(), 0.0)
                     : options.initial_beta;
  if (initial.beta.size() != data.cols()) {
    throw ParameterError("initial_beta length does not match the design width");
  }

  const double n = static_cast<double>(data.rows());
  LogisticFit fit;
  IterativeJob<LabeledRow, State> iterative;
  iterative.make_job = [](int, const State& s) {
    return LogisticGradientJob(s.beta);
  };
  iterative.update = [&](int t, const State& prev, std::vector<KeyValue> out) {
    GradientResult g = UnpackGradient({std::move(out), {}});
    State next;
    next.beta = prev.beta;
    for (std::size_t i = 0; i < next.beta.size(); ++i) {
      g.gradient[i] /= n;
      next.beta[i] -= options.step_size * g.gradient[i];
      if (!std::isfinite(next.beta[i])) throw DivergenceError(t);
    }
    next.gradient_norm = InfNorm(g.gradient);
    fit.trajectory.push_back(next.beta);
    fit.nll_trace.push_back(g.nll);
    return next;
  };
  if (options.tol > 0.0) {
    iterative.converged = [tol = options.tol](const State&, const State& next) {
      return next.gradient_norm < tol;
    };
  }
  auto run = RunIterative(iterative, std::move(initial), options.max_iters,
                          data.records(), config);
  fit.model.beta = std::move(run.state.beta);
  fit.model.iterations = static_cast<int>(run.stats.iterations);
  fit.model.residual_norm = run.state.gradient_norm;
  fit.stats = run.stats;
  return fit;
}

}  // namespace mrlab
