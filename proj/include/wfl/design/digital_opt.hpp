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

#include "wfl/design/objective.hpp"

namespace wfl {

struct DigitalScaConfig {
  enum class Objective {
    kFull,          // eta/mu zeta + bias
    kQuantization,  // sum p / (nu (2^(r'+1) - 1)^2)
  };
  Objective objective = Objective::kFull;
  bool freeze_p = false;     // p_m held at 1/N
  bool freeze_bits = false;  // r'_m held at r_m - 1 of the initial design
};

struct DigitalScaResult {
  DigitalDesign design;
  ScaState state;
  double objective = 0.0;  // true design objective of `design`
};

/// p = 1/N, r = min(8, r_max), beta = 0.8, nu = N beta; while the round
/// latency exceeds T_max or a rate falls below R_min, lower every r by one
/// and, once all are 1, halve beta. Throws kBadInit if nothing works.
DigitalDesign digital_default_init(const DesignInputs& in);

/// Successive convex approximation over (p, nu, r') from `init`, followed by
/// integer recovery r = floor(r') + 1, greedy latency repair, a final pass
/// with the bits fixed, then leftover latency spent on extra bits. Throws kBadInit for an infeasible start and
/// kRoundingInfeasible when no bit reduction restores the latency budget.
DigitalScaResult digital_sca(const DesignInputs& in, const DigitalDesign& init,
                             const ScaOptions& options = {},
                             const DigitalScaConfig& config = {});

/// Rounds with p_m = 1/N.
DigitalScaResult digital_zero_bias_optimized(const DesignInputs& in,
                                             const ScaOptions& options = {});

/// p_m = 1/N and only the quantization-variance term minimized.
DigitalScaResult digital_zero_bias_min_quant(const DesignInputs& in,
                                             const ScaOptions& options = {});

/// Best true objective among SCA runs started from the default design and
/// from both zero-bias variants, the variants themselves included.
DigitalScaResult digital_optimized(const DesignInputs& in,
                                   const ScaOptions& options = {});

/// Largest bits value first, lowest device index on ties, until the expected
/// round latency is within T_max. Throws kRoundingInfeasible.
DigitalDesign repair_latency(DigitalDesign design, const DesignInputs& in);

/// Adds one bit at a time to the device with the largest objective decrease
/// per second of added latency while T_max still holds.
DigitalDesign fill_latency_slack(DigitalDesign design, const DesignInputs& in);

}  // namespace wfl
