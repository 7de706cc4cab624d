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

#include <cstddef>
#include <span>
#include <vector>

#include "wfl/common.hpp"

namespace wfl {

/// Physical and learning constants shared by both transmission schemes.
struct LinkBudget {
  double g_max = 1.0;              // uniform sample-gradient norm bound
  std::size_t dim = 1;             // model dimension d
  double energy_per_sample = 1.0;  // E_s, J
  double noise_psd = 1.0;          // N0, W/Hz
  double bandwidth_hz = 1.0;       // B

  void validate() const;
};

/// sum_m weights_m grads_m, accumulated in device order.
Vec weighted_sum(std::span<const Vec> grads, std::span<const double> weights);

/// Result of one round of the error-free scheme.
struct IdealRoundTranscript {
  Vec g_hat;
  double latency = 0.0;  // d / B
};

IdealRoundTranscript ideal_round(std::span<const Vec> grads,
                                 const LinkBudget& link);

}  // namespace wfl
