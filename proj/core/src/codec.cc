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

#include "mrlab/codec.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>

#include "mrlab/errors.h"

namespace mrlab {
namespace {

void PutBigEndian(std::string& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xFF));
  }
}

std::uint64_t GetBigEndian(std::string_view in) {
  std::uint64_t v = 0;
  for (unsigned char c : in) v = (v << 8) | c;
  return v;
}

void PutLittleEndian(std::string& out, std::uint64_t v) {
  for (int shift = 0; shift < 64; shift += 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xFF));
  }
}

std::uint64_t GetLittleEndian(std::string_view in, std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(in[offset + i]);
  }
  return v;
}

constexpr std::uint64_t kSignBit = 0x8000000000000000ULL;

}  // namespace

std::uint64_t OrderedBits(double v) {
  if (v == 0.0) v = 0.0;  // fold -0.0 onto +0.0
  const auto bits = std::bit_cast<std::uint64_t>(v);
  return (bits & kSignBit) ? ~bits : bits ^ kSignBit;
}

double FromOrderedBits(std::uint64_t bits) {
  const std::uint64_t raw = (bits & kSignBit) ? bits ^ kSignBit : ~bits;
  return std::bit_cast<double>(raw);
}

void KeyBuilder::Separate() {
  if (!empty_) bytes_.push_back(kKeySeparator);
  empty_ = false;
}

KeyBuilder& KeyBuilder::Add(std::string_view field) {
  if (field.find(kKeySeparator) != std::string_view::npos) {
    throw ParameterError("key field contains the 0x1F separator byte");
  }
  Separate();
  bytes_.append(field);
  return *this;
}

KeyBuilder& KeyBuilder::AddU64(std::uint64_t v) {
  Separate();
  PutBigEndian(bytes_, v);
  return *this;
}

KeyBuilder& KeyBuilder::AddI64(std::int64_t v) {
  Separate();
  PutBigEndian(bytes_, static_cast<std::uint64_t>(v) ^ kSignBit);
  return *this;
}

KeyBuilder& KeyBuilder::AddDouble(double v) {
  if (std::isnan(v)) throw ParameterError("NaN is not a valid key component");
  Separate();
  PutBigEndian(bytes_, OrderedBits(v));
  return *this;
}

void KeyReader::ConsumeSeparator() {
  if (first_) {
    first_ = false;
    return;
  }
  if (!pending_separator_) throw ParseError("key: read past last field");
  pending_separator_ = false;
}

std::string_view KeyReader::String() {
  ConsumeSeparator();
  const auto pos = rest_.find(kKeySeparator);
  std::string_view field = rest_.substr(0, pos);
  if (pos == std::string_view::npos) {
    rest_ = {};
  } else {
    rest_.remove_prefix(pos + 1);
    pending_separator_ = true;
  }
  return field;
}

std::string_view KeyReader::Fixed(std::size_t width) {
  ConsumeSeparator();
  if (rest_.size() < width) throw ParseError("key: truncated numeric field");
  std::string_view field = rest_.substr(0, width);
  rest_.remove_prefix(width);
  if (!rest_.empty()) {
    if (rest_.front() != kKeySeparator) {
      throw ParseError("key: missing separator after numeric field");
    }
    rest_.remove_prefix(1);
    pending_separator_ = true;
  }
  return field;
}

std::uint64_t KeyReader::U64() { return GetBigEndian(Fixed(8)); }

std::int64_t KeyReader::I64() {
  return static_cast<std::int64_t>(GetBigEndian(Fixed(8)) ^ kSignBit);
}

double KeyReader::Double() { return FromOrderedBits(GetBigEndian(Fixed(8))); }

std::string EncodeCount(std::uint64_t count) { return std::to_string(count); }

std::uint64_t DecodeCount(std::string_view bytes) {
  std::uint64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(bytes.data(), bytes.data() + bytes.size(), v);
  if (ec != std::errc() || ptr != bytes.data() + bytes.size() ||
      bytes.empty()) {
    throw ParseError("value: not a decimal count: '" + std::string(bytes) +
                     "'");
  }
  return v;
}

std::string EncodeVector(std::span<const double> values) {
  std::string out;
  out.reserve(8 * (values.size() + 1));
  PutLittleEndian(out, values.size());
  for (double v : values) PutLittleEndian(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

std::vector<double> DecodeVector(std::string_view bytes) {
  if (bytes.size() < 8) throw ParseError("value: truncated vector header");
  const std::uint64_t count = GetLittleEndian(bytes, 0);
  if ((bytes.size() - 8) / 8 != count || (bytes.size() - 8) % 8 != 0) {
    throw ParseError("value: vector length prefix does not match payload");
  }
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::bit_cast<double>(GetLittleEndian(bytes, 8 + 8 * i));
  }
  return out;
}

std::string EncodeMatrix(std::size_t rows, std::size_t cols,
                         std::span<const double> row_major) {
  if (row_major.size() != rows * cols) {
    throw ParameterError("EncodeMatrix: data size != rows * cols");
  }
  std::string out;
  out.reserve(8 * (row_major.size() + 2));
  PutLittleEndian(out, rows);
  PutLittleEndian(out, cols);
  for (double v : row_major) {
    PutLittleEndian(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

MatrixView DecodeMatrix(std::string_view bytes) {
  if (bytes.size() < 16) throw ParseError("value: truncated matrix header");
  MatrixView m;
  m.rows = GetLittleEndian(bytes, 0);
  m.cols = GetLittleEndian(bytes, 8);
  const std::size_t payload = bytes.size() - 16;
  if (payload % 8 != 0 || payload / 8 != m.rows * m.cols) {
    throw ParseError("value: matrix shape does not match payload");
  }
  m.data.resize(m.rows * m.cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    m.data[i] = std::bit_cast<double>(GetLittleEndian(bytes, 16 + 8 * i));
  }
  return m;
}

}  // namespace mrlab
