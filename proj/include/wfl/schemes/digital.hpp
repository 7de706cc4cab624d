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

#include "wfl/schemes/link.hpp"
#include "wfl/schemes/quantizer.hpp"
#include "wfl/wireless/env.hpp"

namespace wfl {

struct DigitalDesign {
  std::vector<double> rho;   // channel thresholds
  std::vector<double> beta;  // exp(-rho^2 / lambda)
  std::vector<double> nu;    // post-scalers
  std::vector<double> p;     // beta / nu
  std::vector<int> bits;     // r_m
  std::vector<double> rate;  // log2(1 + E_s rho^2 / N0), bps/Hz
  std::vector<std::uint64_t> payload;  // 64 + d r_m

  std::size_t size() const { return rho.size(); }
};

/// Minimum spectral efficiency accepted for a design, bps/Hz.
inline constexpr double kMinRate = 0.05;

DigitalDesign make_digital_design(std::vector<double> rho,
                                  std::vector<double> nu, std::vector<int> bits,
                                  const std::vector<DeviceProfile>& profiles,
                                  const LinkBudget& link);

/// Same design expressed through beta_m = exp(-rho_m^2 / lambda_m).
DigitalDesign make_digital_design_from_beta(
    const std::vector<double>& beta, std::vector<double> nu,
    std::vector<int> bits, const std::vector<DeviceProfile>& profiles,
    const LinkBudget& link);

struct DigitalOptions {
  bool force_participation = false;
};

struct DigitalRoundTranscript {
  std::vector<int> chi;
  std::vector<double> tau;  // chi_m L_m / (B R_m)
  std::vector<std::uint64_t> bits_sent;
  Vec g_hat;
  Vec g_tilde;
  double latency = 0.0;
};

/// g_hat = sum chi_m Q(g_m) / nu_m. Device m dithers with the stream
/// (seed, m, round, dither).
DigitalRoundTranscript digital_round(const DigitalDesign& design,
                                     std::span<const Vec> grads,
                                     const ChannelDraw& channels,
                                     const LinkBudget& link, std::uint64_t seed,
                                     std::uint64_t round,
                                     const DigitalOptions& options = {});

/// zeta^D of the digital estimate.
double digital_variance_bound(const DigitalDesign& design,
                              std::span<const double> sigma,
                              const LinkBudget& link);

/// sum beta_m L_m / (B R_m); throws kDegenerateRate if some R_m <= 0.
double expected_round_latency(const DigitalDesign& design,
                              const LinkBudget& link);

}  // namespace wfl
