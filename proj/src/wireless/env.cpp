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

#include "wfl/wireless/env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wfl {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double RadioConfig::noise_psd_w() const {
  return dbm_to_watts(noise_psd_dbm_per_hz);
}

double RadioConfig::tx_power_w() const { return dbm_to_watts(tx_power_dbm); }

double RadioConfig::energy_per_sample() const {
  return energy_per_sample_j.value_or(tx_power_w() / bandwidth_hz);
}

void RadioConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::kInvalidConfig, std::string(name) + " must be positive");
  };
  positive(bandwidth_hz, "bandwidth_hz");
  positive(carrier_freq_hz, "carrier_freq_hz");
  positive(pathloss_exponent, "pathloss_exponent");
  positive(pathloss_ref_db, "pathloss_ref_db");
  positive(cell_radius_m, "cell_radius_m");
  positive(energy_per_sample(), "energy_per_sample");
  positive(noise_psd_w(), "noise_psd");
}

void validate_profiles(const std::vector<DeviceProfile>& profiles) {
  if (profiles.empty())
    throw Error(ErrorCode::kInvalidProfile, "no devices");
  for (const auto& p : profiles) {
    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda))
      throw Error(ErrorCode::kInvalidProfile,
                  "device " + std::to_string(p.id) + " has non-positive gain");
    if (!(p.sigma >= 0.0))
      throw Error(ErrorCode::kInvalidProfile,
                  "device " + std::to_string(p.id) + " has negative sigma");
  }
}

double pathloss_gain(double distance_m, double ref_db, double exponent) {
  return std::pow(10.0,
                  -(ref_db + 10.0 * exponent * std::log10(distance_m)) / 10.0);
}

std::vector<DeviceProfile> place_devices(std::size_t n, const RadioConfig& cfg,
                                         CounterRng& rng) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one device");
  cfg.validate();
  std::vector<DeviceProfile> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double r = std::max(1.0, cfg.cell_radius_m * std::sqrt(rng.uniform()));
    out[m].id = m;
    out[m].distance_m = r;
    out[m].lambda = pathloss_gain(r, cfg.pathloss_ref_db, cfg.pathloss_exponent);
  }
  return out;
}

ChannelDraw draw_channels(const std::vector<DeviceProfile>& profiles,
                          CounterRng& rng) {
  ChannelDraw h(profiles.size());
  for (std::size_t m = 0; m < profiles.size(); ++m) {
    const double s = std::sqrt(profiles[m].lambda / 2.0);
    const double a = rng.normal();
    const double b = rng.normal();
    h[m] = {s * a, s * b};
  }
  return h;
}

ChannelDraw draw_round_channels(const std::vector<DeviceProfile>& profiles,
                                std::uint64_t seed, std::uint64_t round) {
  ChannelDraw h(profiles.size());
  for (std::size_t m = 0; m < profiles.size(); ++m) {
    CounterRng rng(StreamKey{seed, m, round, Purpose::kChannel});
    const double s = std::sqrt(profiles[m].lambda / 2.0);
    const double a = rng.normal();
    const double b = rng.normal();
    h[m] = {s * a, s * b};
  }
  return h;
}

}  // namespace wfl
