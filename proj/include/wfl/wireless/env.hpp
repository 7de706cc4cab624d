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
#include <optional>
#include <vector>

#include "wfl/common.hpp"
#include "wfl/rng.hpp"

namespace wfl {

struct RadioConfig {
  double bandwidth_hz = 1e6;
  double noise_psd_dbm_per_hz = -161.0;
  double tx_power_dbm = 0.0;
  double carrier_freq_hz = 2.4e9;  // carried for reference only
  double pathloss_exponent = 2.2;
  double pathloss_ref_db = 50.0;
  double cell_radius_m = 3000.0;
  std::optional<double> energy_per_sample_j;  // overrides P/B

  double noise_psd_w() const;
  double tx_power_w() const;
  /// E_s; P/B unless overridden.
  double energy_per_sample() const;
  void validate() const;
};

/// 10^((dBm - 30) / 10).
double dbm_to_watts(double dbm);

struct DeviceProfile {
  std::size_t id = 0;
  double distance_m = 0.0;
  double lambda = 0.0;  // average squared channel gain
  double sigma = 0.0;   // mini-batch gradient deviation bound
};

/// Throws kInvalidProfile unless every lambda is positive and finite and
/// every sigma is non-negative.
void validate_profiles(const std::vector<DeviceProfile>& profiles);

double pathloss_gain(double distance_m, double ref_db, double exponent);

/// Area-uniform placement in a disc; distances below 1 m are clamped to 1 m
/// so the log-distance model stays in its range of validity.
std::vector<DeviceProfile> place_devices(std::size_t n, const RadioConfig& cfg,
                                         CounterRng& rng);

using ChannelDraw = std::vector<std::complex<double>>;

/// h_m ~ CN(0, lambda_m), one coefficient per device.
ChannelDraw draw_channels(const std::vector<DeviceProfile>& profiles,
                          CounterRng& rng);

/// Per-device channel stream keyed by (seed, device, round).
ChannelDraw draw_round_channels(const std::vector<DeviceProfile>& profiles,
                                std::uint64_t seed, std::uint64_t round);

}  // namespace wfl
