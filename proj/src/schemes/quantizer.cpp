// Copyright 2026 The wfl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wfl/schemes/quantizer.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

namespace wfl {

namespace {

void check_bits(int bits) {
  if (bits < 1 || bits > kMaxQuantBits)
    throw Error(ErrorCode::kInvalidArgument,
                "quantizer bits must be in [1, 32], got " + std::to_string(bits));
}

double top_level(int bits) { return std::ldexp(1.0, bits) - 1.0; }

}  // namespace

double grid_value(std::uint32_t level, int bits) {
  const double k = top_level(bits);
  return (2.0 * level - k) / k;
}

QuantizedGradient dithered_quantize(const Vec& g, int bits, CounterRng& rng) {
  check_bits(bits);
  QuantizedGradient q;
  q.bits = bits;
  q.levels.assign(static_cast<std::size_t>(g.size()), 0);
  q.linf_norm = g.size() ? g.lpNorm<Eigen::Infinity>() : 0.0;
  if (q.linf_norm == 0.0) return q;
  const double k = top_level(bits);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double pos = (g(i) / q.linf_norm + 1.0) * 0.5 * k;
    double lo = std::floor(pos);
    if (lo >= k) lo = k;  // v == +1 exactly
    const double frac = pos - lo;
    // One uniform per coordinate keeps the stream layout independent of g.
    const double u = rng.uniform();
    q.levels[static_cast<std::size_t>(i)] =
        static_cast<std::uint32_t>(lo) + (u < frac ? 1u : 0u);
  }
  return q;
}

Vec dequantize(const QuantizedGradient& q) {
  check_bits(q.bits);
  const double k = top_level(q.bits);
  Vec out(static_cast<Eigen::Index>(q.levels.size()));
  for (std::size_t i = 0; i < q.levels.size(); ++i) {
    if (q.levels[i] > k)
      throw Error(ErrorCode::kCorruptPayload,
                  "level " + std::to_string(q.levels[i]) + " exceeds grid");
    out(static_cast<Eigen::Index>(i)) = grid_value(q.levels[i], q.bits) * q.linf_norm;
  }
  return out;
}

std::uint64_t payload_bits(std::size_t dim, int bits) {
  return 64 + static_cast<std::uint64_t>(dim) * static_cast<std::uint64_t>(bits);
}

std::vector<std::uint8_t> encode_payload(const QuantizedGradient& q) {
  check_bits(q.bits);
  const std::uint64_t nbits = payload_bits(q.levels.size(), q.bits);
  std::vector<std::uint8_t> out((nbits + 7) / 8, 0);
  const auto raw = std::bit_cast<std::uint64_t>(q.linf_norm);
  for (int b = 0; b < 8; ++b) out[b] = static_cast<std::uint8_t>(raw >> (56 - 8 * b));
  std::uint64_t at = 64;
  for (std::uint32_t level : q.levels) {
    for (int b = q.bits - 1; b >= 0; --b, ++at) {
      if ((level >> b) & 1u) out[at / 8] |= static_cast<std::uint8_t>(0x80u >> (at % 8));
    }
  }
  return out;
}

QuantizedGradient decode_payload(std::span<const std::uint8_t> bytes,
                                 std::size_t dim, int bits) {
  check_bits(bits);
  const std::uint64_t nbits = payload_bits(dim, bits);
  if (bytes.size() != (nbits + 7) / 8)
    throw Error(ErrorCode::kCorruptPayload, "payload length does not match");
  QuantizedGradient q;
  q.bits = bits;
  std::uint64_t raw = 0;
  for (int b = 0; b < 8; ++b) raw = (raw << 8) | bytes[b];
  q.linf_norm = std::bit_cast<double>(raw);
  if (!(q.linf_norm >= 0.0) || !std::isfinite(q.linf_norm))
    throw Error(ErrorCode::kCorruptPayload, "invalid norm field");
  q.levels.resize(dim);
  std::uint64_t at = 64;
  for (std::size_t i = 0; i < dim; ++i) {
    std::uint32_t level = 0;
    for (int b = 0; b < bits; ++b, ++at)
      level = (level << 1) | ((bytes[at / 8] >> (7 - at % 8)) & 1u);
    q.levels[i] = level;
  }
  for (; at < 8 * bytes.size(); ++at)
    if ((bytes[at / 8] >> (7 - at % 8)) & 1u)
      throw Error(ErrorCode::kCorruptPayload, "non-zero padding");
  return q;
}

}  // namespace wfl
