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

#ifndef MRLAB_RNG_H_
#define MRLAB_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace mrlab {

// SplitMix64 finalizer. Used both to expand seeds and to derive independent
// stream seeds from (seed, id...) tuples.
std::uint64_t SplitMix64(std::uint64_t x);

// Stream seed for a tuple of identifiers. Order-sensitive.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a);
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

// xoshiro256** generator. Cheap to construct, so one instance per split or
// per (record, tree) is fine. Satisfies UniformRandomBitGenerator.
//
// The distributions below are implemented here rather than taken from
// <random> because the standard distributions are implementation-defined,
// and sampled outputs must be identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01();

  // Uniform integer in [lo, hi], inclusive, unbiased.
  std::uint64_t UniformInt(std::uint64_t lo, std::uint64_t hi);

  // Poisson(mean) variate. Inversion by sequential search for small means,
  // Hormann's PTRS transformed rejection otherwise.
  std::uint64_t Poisson(double mean);

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace mrlab

#endif  // MRLAB_RNG_H_
