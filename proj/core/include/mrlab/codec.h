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

#ifndef MRLAB_CODEC_H_
#define MRLAB_CODEC_H_

// Byte encodings for MapReduce keys and values.
//
// Keys are tuples of fields joined by the unit separator 0x1F. String fields
// are raw UTF-8 and may not contain 0x1F. Numeric fields are fixed-width
// big-endian so that bytewise key order equals numeric order:
//   u64    8 bytes, big-endian
//   i64    8 bytes, big-endian with the sign bit flipped
//   double 8 bytes, IEEE-754 bits transformed to a totally ordered integer
//
// Values:
//   count   UTF-8 decimal
//   vector  u64 little-endian element count, then little-endian doubles
//   matrix  u64 LE rows, u64 LE cols, then row-major little-endian doubles

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mrlab {

inline constexpr char kKeySeparator = '\x1F';

class KeyBuilder {
 public:
  KeyBuilder& Add(std::string_view field);
  KeyBuilder& AddU64(std::uint64_t v);
  KeyBuilder& AddI64(std::int64_t v);
  KeyBuilder& AddDouble(double v);

  const std::string& bytes() const& { return bytes_; }
  std::string bytes() && { return std::move(bytes_); }

 private:
  void Separate();

  std::string bytes_;
  bool empty_ = true;
};

// Reads fields back in the order they were written. Throws ParseError on a
// malformed key.
class KeyReader {
 public:
  explicit KeyReader(std::string_view key) : rest_(key) {}

  std::string_view String();
  std::uint64_t U64();
  std::int64_t I64();
  double Double();
  bool AtEnd() const { return rest_.empty() && !pending_separator_; }

 private:
  std::string_view Fixed(std::size_t width);
  void ConsumeSeparator();

  std::string_view rest_;
  bool first_ = true;
  bool pending_separator_ = false;
};

std::string EncodeCount(std::uint64_t count);
std::uint64_t DecodeCount(std::string_view bytes);

std::string EncodeVector(std::span<const double> values);
std::vector<double> DecodeVector(std::string_view bytes);

struct MatrixView {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major
};

std::string EncodeMatrix(std::size_t rows, std::size_t cols,
                         std::span<const double> row_major);
MatrixView DecodeMatrix(std::string_view bytes);

// Order-preserving double <-> u64 transforms used by key encoding.
std::uint64_t OrderedBits(double v);
double FromOrderedBits(std::uint64_t bits);

}  // namespace mrlab

#endif  // MRLAB_CODEC_H_
