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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wfl/common.hpp"
#include "wfl/rng.hpp"

namespace wfl {

/// Levels index a grid of 2^bits points spread uniformly over [-1, 1];
/// reconstruction is grid value times linf_norm.
struct QuantizedGradient {
  std::vector<std::uint32_t> levels;
  double linf_norm = 0.0;
  int bits = 1;
};

inline constexpr int kMaxQuantBits = 32;

/// Grid value of `level`; exact at both endpoints.
double grid_value(std::uint32_t level, int bits);

QuantizedGradient dithered_quantize(const Vec& g, int bits, CounterRng& rng);

/// Throws kCorruptPayload for a level outside [0, 2^bits - 1].
Vec dequantize(const QuantizedGradient& q);

/// Payload layout: big-endian IEEE-754 double linf_norm, then every level in
/// `bits` bits, most significant bit first, zero-padded to a whole byte.
std::vector<std::uint8_t> encode_payload(const QuantizedGradient& q);
QuantizedGradient decode_payload(std::span<const std::uint8_t> bytes,
                                 std::size_t dim, int bits);

/// 64 + dim * bits.
std::uint64_t payload_bits(std::size_t dim, int bits);

}  // namespace wfl
