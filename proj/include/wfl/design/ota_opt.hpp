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

struct OtaScaResult {
  OtaDesign design;
  ScaState state;
  double objective = 0.0;
};

/// gamma_m = sqrt(d lambda_m E_s / (2 G^2)): every alpha_m at its maximum.
OtaDesign ota_min_noise_variance(const DesignInputs& in);

/// Smallest pre-scaler on the increasing branch with alpha_m(gamma) = target;
/// gamma_max when the target is at or above the peak.
double ota_gamma_for_alpha(double target, double lambda, const LinkBudget& link,
                           double rel_tol = 1e-15);

/// Equal alpha_m = min_m alpha_m,max for all devices, found by bisection.
OtaDesign ota_zero_bias(const DesignInputs& in, double bisect_tol = 1e-12);

/// Successive convex approximation from `init`. Each accepted iterate is
/// realized exactly: the pre-scalers are tightened so that
/// alpha_m(gamma_m) = alpha p_m for the subproblem's alpha and p.
/// Throws kBadInit for an infeasible start.
OtaScaResult ota_sca(const DesignInputs& in, const OtaDesign& init,
                     const ScaOptions& options = {});

/// Best of SCA started from the zero-bias and from the minimum-noise-variance
/// designs, with the two starting designs kept as candidates.
OtaScaResult ota_optimized(const DesignInputs& in, const ScaOptions& options = {});

}  // namespace wfl
