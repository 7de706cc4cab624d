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

#include <complex>
#include <cstdint>
#include <vector>

#include "wfl/rng.hpp"
#include "wfl/schemes/link.hpp"
#include "wfl/wireless/env.hpp"

namespace wfl {

struct OtaDesign {
  std::vector<double> gamma;    // pre-scalers
  std::vector<double> alpha_m;  // gamma * exp(-gamma^2 G^2 / (d lambda E_s))
  std::vector<double> p;        // alpha_m / alpha
  double alpha = 0.0;

  std::size_t size() const { return gamma.size(); }
};

double ota_alpha_m(double gamma, double lambda, const LinkBudget& link);
double ota_gamma_max(double lambda, const LinkBudget& link);
double ota_alpha_max(double lambda, const LinkBudget& link);

/// Derives alpha_m, alpha and p from the pre-scalers. Throws
/// kDegenerateDesign when alpha is zero.
OtaDesign make_ota_design(std::vector<double> gamma,
                          const std::vector<DeviceProfile>& profiles,
                          const LinkBudget& link);

/// 1 iff |h| >= G gamma / sqrt(d E_s).
bool ota_indicator(std::complex<double> h, double gamma, const LinkBudget& link);

enum class OtaMode {
  kChannel,   // truncated channel inversion on the drawn channels
  kExpected,  // chi_m gamma_m replaced by its mean alpha_m: g_hat = sum p_m g_m
};

struct OtaOptions {
  OtaMode mode = OtaMode::kChannel;
  bool noise = true;
};

struct OtaRoundTranscript {
  std::vector<int> chi;
  std::vector<double> tx_energy;  // ||x_m||^2
  Vec g_hat;
  Vec g_tilde;  // sum p_m g_m
  double latency = 0.0;
};

/// g_hat = (sum chi_m gamma_m g_m + z) / alpha with z ~ N(0, N0 I_d).
OtaRoundTranscript ota_round(const OtaDesign& design,
                             std::span<const Vec> grads,
                             const ChannelDraw& channels,
                             const LinkBudget& link, CounterRng& noise_rng,
                             const OtaOptions& options = {});

/// zeta^A of the OTA estimate.
double ota_variance_bound(const OtaDesign& design, std::span<const double> sigma,
                          const LinkBudget& link);

}  // namespace wfl
