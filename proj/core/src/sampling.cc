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

#include "mrlab/sampling.h"

#include <algorithm>
#include <cmath>

namespace mrlab {
namespace internal {

void EmitKeyedIndex(double key, const MapContext& ctx, Emitter& out) {
  out.Emit(KeyBuilder()
               .AddDouble(key)
               .AddU64(ctx.split_id)
               .AddU64(ctx.record_index)
               .bytes(),
           EncodeCount(ctx.record_index));
}

void IdentityReduce(std::string_view key, std::span<const std::string> values,
                    Emitter& out) {
  for (const auto& v : values) out.Emit(std::string(key), v);
}

std::size_t DecodeIndexValue(const KeyValue& kv) {
  return static_cast<std::size_t>(DecodeCount(kv.value));
}

ScanResult FinishScan(const ScanThresholds& thresholds, std::size_t n,
                      JobResult run) {
  ScanResult result;
  result.thresholds = thresholds;
  result.stats = run.stats;
  for (const KeyValue& kv : run.output) {
    KeyReader key(kv.key);
    if (key.Double() < thresholds.accept) {
      ++result.accepted;
    } else {
      ++result.waitlisted;
    }
  }
  if (result.accepted > n) {
    result.status = ScanStatus::kAcceptOverflow;
  } else if (result.candidates() < n) {
    result.status = ScanStatus::kWaitlistUnderflow;
  } else {
    // Output is in key order: every accepted key precedes every waitlisted
    // one, so the first n are the accepted set topped up from the waitlist.
    result.indices.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      result.indices.push_back(DecodeIndexValue(run.output[i]));
    }
  }
  return result;
}

}  // namespace internal

ScanThresholds BernsteinThresholds(std::size_t n, std::size_t population,
                                   double delta) {
  if (n < 1 || n > population) {
    throw ParameterError("bernstein thresholds: need 1 <= n <= N");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("bernstein thresholds: delta must lie in (0, 1)");
  }
  const double big_n = static_cast<double>(population);
  const double p = static_cast<double>(n) / big_n;
  const double log_term = -std::log(delta / 2.0);
  const double g1 = log_term / big_n;
  const double g2 = (2.0 / 3.0) * log_term / big_n;
  ScanThresholds t;
  t.accept = std::max(0.0, p + g1 - std::sqrt(g1 * g1 + 2.0 * g1 * p));
  t.waitlist = std::min(1.0, p + g2 + std::sqrt(g2 * g2 + 3.0 * g2 * p));
  return t;
}

const char* ToString(ScanStatus status) {
  switch (status) {
    case ScanStatus::kOk:
      return "ok";
    case ScanStatus::kWaitlistUnderflow:
      return "waitlist_underflow";
    case ScanStatus::kAcceptOverflow:
      return "accept_overflow";
  }
  return "unknown";
}

}  // namespace mrlab
