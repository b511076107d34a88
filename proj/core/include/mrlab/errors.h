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

#ifndef MRLAB_ERRORS_H_
#define MRLAB_ERRORS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace mrlab {

// Invalid argument to a public operation (n < 1, k > n, delta outside (0,1)).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input data; `row()` is the 1-based data row (header excluded)
// when the failure can be attributed to a row.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::optional<std::size_t> row = {})
      : std::runtime_error(row ? "row " + std::to_string(*row) + ": " + what
                               : what),
        row_(row) {}
  std::optional<std::size_t> row() const { return row_; }

 private:
  std::optional<std::size_t> row_;
};

// Raised when a mapper, combiner or reducer throws. The original message is
// kept and the failing location is attached.
class JobError : public std::runtime_error {
 public:
  enum class Phase { kMap, kCombine, kReduce };

  struct Location {
    Phase phase = Phase::kMap;
    std::uint32_t split_id = 0;
    // Global record index for map failures.
    std::optional<std::size_t> record_index;
    // Group key (raw bytes) for combine/reduce failures.
    std::optional<std::string> key;
    std::optional<int> iteration;
  };

  JobError(const std::string& cause, Location location);

  const std::string& cause() const { return cause_; }
  const Location& location() const { return location_; }

  // Same error with the iteration index filled in.
  JobError WithIteration(int iteration) const;

 private:
  std::string cause_;
  Location location_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::size_t pivot_index, double pivot, double scale);
  std::size_t pivot_index() const { return pivot_index_; }

 private:
  std::size_t pivot_index_;
};

class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(int iteration)
      : std::runtime_error("non-finite coefficients at iteration " +
                           std::to_string(iteration)),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

}  // namespace mrlab

#endif  // MRLAB_ERRORS_H_
