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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "wfl/wireless/env.hpp"

namespace wfl {
namespace {

TEST(Radio, UnitConversions) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(0.0), 1e-3);
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  RadioConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.noise_psd_w(), std::pow(10.0, (-161.0 - 30.0) / 10.0));
  EXPECT_DOUBLE_EQ(cfg.energy_per_sample(), 1e-3 / 1e6);
  cfg.energy_per_sample_j = 2.5;
  EXPECT_DOUBLE_EQ(cfg.energy_per_sample(), 2.5);
  cfg.bandwidth_hz = 0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(PathLoss, ClosedForm) {
  EXPECT_NEAR(pathloss_gain(1.0, 50.0, 2.2), 1e-5, 1e-20);
  EXPECT_NEAR(pathloss_gain(10.0, 50.0, 2.2), std::pow(10.0, -7.2), 1e-21);
  EXPECT_EQ(pathloss_gain(123.0, 50.0, 2.2), pathloss_gain(123.0, 50.0, 2.2));
}

TEST(Placement, AreaUniformKolmogorovSmirnov) {
  RadioConfig cfg;
  cfg.cell_radius_m = 500.0;
  CounterRng rng(StreamKey{1, 0, 0, Purpose::kPlacement});
  const std::size_t n = 100000;
  auto devs = place_devices(n, cfg, rng);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = devs[i].distance_m * devs[i].distance_m / (500.0 * 500.0);
    EXPECT_DOUBLE_EQ(devs[i].lambda, pathloss_gain(devs[i].distance_m, 50.0, 2.2));
  }
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    ks = std::max({ks, std::abs((i + 1.0) / n - u[i]), std::abs(u[i] - double(i) / n)});
  EXPECT_LT(ks, 0.02);
}

TEST(Profiles, RejectNonPositiveGain) {
  std::vector<DeviceProfile> p(2);
  p[0].lambda = 1e-9;
  p[1].lambda = 0.0;
  try {
    validate_profiles(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidProfile);
  }
  p[1].lambda = 2e-9;
  EXPECT_NO_THROW(validate_profiles(p));
}

TEST(Channels, ExponentialMomentsTailAndIndependence) {
  const double lambda = 3e-7;
  std::vector<DeviceProfile> prof(1);
  prof[0].lambda = lambda;
  const int n = 100000;
  const double rho = std::sqrt(lambda * std::log(2.0));
  double sum = 0.0, prev = 0.0, cross = 0.0, sq = 0.0;
  int above = 0;
  std::vector<double> g(n);
  for (int t = 0; t < n; ++t) {
    const auto h = draw_round_channels(prof, 5, static_cast<std::uint64_t>(t));
    g[t] = std::norm(h[0]);
    sum += g[t];
    above += std::abs(h[0]) >= rho;
  }
  const double mean = sum / n;
  EXPECT_LE(std::abs(mean - lambda), 3 * lambda / std::sqrt(double(n)));
  EXPECT_NEAR(above / double(n), 0.5, 0.01);
  for (int t = 0; t < n; ++t) {
    const double c = g[t] - mean;
    sq += c * c;
    if (t) cross += c * prev;
    prev = c;
  }
  EXPECT_LE(std::abs(cross / sq), 0.02);
}

TEST(Channels, StreamDrawMatchesCircularGaussian) {
  std::vector<DeviceProfile> prof(3);
  for (int m = 0; m < 3; ++m) prof[m].lambda = std::pow(10.0, -m);
  CounterRng rng(99);
  double s[3] = {0, 0, 0};
  for (int t = 0; t < 20000; ++t) {
    const auto h = draw_channels(prof, rng);
    for (int m = 0; m < 3; ++m) s[m] += std::norm(h[m]);
  }
  for (int m = 0; m < 3; ++m)
    EXPECT_NEAR(s[m] / 20000, prof[m].lambda, 4 * prof[m].lambda / std::sqrt(20000.0));
}

}  // namespace
}  // namespace wfl
