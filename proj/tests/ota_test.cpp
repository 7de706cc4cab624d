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

#include <cmath>
#include <numbers>

#include "wfl/schemes/ota.hpp"

namespace wfl {
namespace {

LinkBudget toy_link() {
  LinkBudget l;
  l.g_max = 1.0;
  l.dim = 20;
  l.energy_per_sample = 1.0;
  l.noise_psd = 1e-3;
  l.bandwidth_hz = 1e3;
  return l;
}

std::vector<DeviceProfile> toy_profiles(std::vector<double> lambdas) {
  std::vector<DeviceProfile> p(lambdas.size());
  for (std::size_t m = 0; m < p.size(); ++m) {
    p[m].id = m;
    p[m].lambda = lambdas[m];
  }
  return p;
}

std::vector<Vec> toy_grads(std::size_t n, std::size_t d, double norm,
                           std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Vec> g;
  for (std::size_t m = 0; m < n; ++m) {
    Vec v(static_cast<Eigen::Index>(d));
    for (auto& x : v) x = rng.normal();
    g.push_back(norm * v.normalized());
  }
  return g;
}

TEST(OtaIndicator, ThresholdIsInclusive) {
  const auto link = toy_link();
  const double gamma = 0.7;
  const double thr = link.g_max * gamma / std::sqrt(20.0);
  EXPECT_TRUE(ota_indicator({thr, 0.0}, gamma, link));
  EXPECT_FALSE(ota_indicator({std::nextafter(thr, 0.0), 0.0}, gamma, link));
  EXPECT_TRUE(ota_indicator({1e-200, 0.0}, 1e-300, link));
}

TEST(OtaIndicator, ParticipationProbability) {
  const auto link = toy_link();
  const auto prof = toy_profiles({0.2});
  const double gamma = 1.1;
  int hits = 0;
  const int n = 100000;
  for (int t = 0; t < n; ++t)
    hits += ota_indicator(draw_round_channels(prof, 3, t)[0], gamma, link);
  const double expect = std::exp(-gamma * gamma / (20.0 * 0.2));
  EXPECT_NEAR(hits / double(n), expect, 0.005);
  EXPECT_NEAR(expect, ota_alpha_m(gamma, 0.2, link) / gamma, 1e-15);
}

TEST(OtaDesign, MaxPrescalerReachesAlphaMax) {
  const auto link = toy_link();
  const auto prof = toy_profiles({0.1, 0.5, 2.0});
  std::vector<double> g;
  double alpha = 0.0;
  for (const auto& p : prof) {
    g.push_back(ota_gamma_max(p.lambda, link));
    alpha += std::sqrt(20.0 * p.lambda / (2.0 * std::numbers::e));
  }
  const auto d = make_ota_design(g, prof, link);
  EXPECT_NEAR(d.alpha, alpha, 1e-12 * alpha);
  for (std::size_t m = 0; m < 3; ++m)
    EXPECT_NEAR(d.alpha_m[m], ota_alpha_max(prof[m].lambda, link), 1e-15);
}

TEST(OtaDesign, AlphaIsQuasiConcave) {
  const auto link = toy_link();
  const double lam = 0.3, gmax = ota_gamma_max(lam, link);
  double prev = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    const double a = ota_alpha_m(2.0 * gmax * k / 1000.0, lam, link);
    if (k <= 500)
      EXPECT_GT(a, prev) << k;
    else
      EXPECT_LT(a, prev) << k;
    prev = a;
  }
}

TEST(OtaDesign, ZeroPrescalersAreDegenerate) {
  const auto link = toy_link();
  try {
    make_ota_design({0.0, 0.0}, toy_profiles({1.0, 1.0}), link);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateDesign);
  }
}

TEST(OtaRound, ExpectedPathIsConvexCombination) {
  const auto link = toy_link();
  const auto prof = toy_profiles({0.1, 0.4, 1.0});
  const auto d = make_ota_design({0.5, 0.9, 1.3}, prof, link);
  const auto g = toy_grads(3, 20, 0.8, 1);
  CounterRng rng(1);
  const auto tr = ota_round(d, g, draw_round_channels(prof, 1, 0), link, rng,
                            {OtaMode::kExpected, false});
  const Vec expect = d.p[0] * g[0] + d.p[1] * g[1] + d.p[2] * g[2];
  EXPECT_LE((tr.g_hat - expect).norm(), 1e-15);
  EXPECT_EQ(tr.g_hat, tr.g_tilde);
  EXPECT_DOUBLE_EQ(tr.latency, 20.0 / 1e3);
}

TEST(OtaRound, SingleDeviceUnconditionallyUnbiased) {
  const auto link = toy_link();
  const auto prof = toy_profiles({0.25});
  const auto d = make_ota_design({1.0}, prof, link);
  const auto g = toy_grads(1, 20, 0.9, 2);
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  CounterRng rng(0);
  for (int t = 0; t < n; ++t) {
    const auto tr = ota_round(d, g, draw_round_channels(prof, 8, t), link, rng,
                              {OtaMode::kChannel, false});
    if (tr.chi[0]) EXPECT_NEAR(tr.g_hat(0), g[0](0) / d.alpha_m[0] * d.gamma[0], 1e-12);
    s += tr.g_hat(0);
    s2 += tr.g_hat(0) * tr.g_hat(0);
  }
  const double mean = s / n, sd = std::sqrt(s2 / n - mean * mean);
  EXPECT_LE(std::abs(mean - g[0](0)), 3 * sd / std::sqrt(double(n)));
  EXPECT_GE(d.gamma[0] / d.alpha_m[0], 1.0);
}

TEST(OtaRound, EnergyConstraintNeverViolated) {
  const auto link = toy_link();
  const auto prof = toy_profiles({0.05, 0.2, 1.0, 3.0});
  std::vector<double> gam;
  for (const auto& p : prof) gam.push_back(ota_gamma_max(p.lambda, link) * 1.3);
  const auto d = make_ota_design(gam, prof, link);
  const auto g = toy_grads(4, 20, 1.0, 3);
  CounterRng rng(0);
  const double cap = 20.0 * link.energy_per_sample;
  for (int t = 0; t < 100000; ++t) {
    const auto tr = ota_round(d, g, draw_round_channels(prof, 4, t), link, rng,
                              {OtaMode::kChannel, false});
    for (int m = 0; m < 4; ++m)
      if (tr.chi[m]) ASSERT_LE(tr.tx_energy[m], cap * (1 + 1e-12));
  }
}

TEST(OtaRound, UnbiasedWithNoise) {
  const auto link = toy_link();
  const auto prof = toy_profiles({0.1, 0.3, 0.9});
  const auto d = make_ota_design({0.6, 0.8, 1.0}, prof, link);
  const auto g = toy_grads(3, 20, 0.7, 4);
  const int n = 100000;
  Vec s = Vec::Zero(20), s2 = Vec::Zero(20);
  for (int t = 0; t < n; ++t) {
    CounterRng rng(StreamKey{6, 3, static_cast<std::uint64_t>(t), Purpose::kNoise});
    const auto tr = ota_round(d, g, draw_round_channels(prof, 6, t), link, rng);
    s += tr.g_hat;
    s2 += tr.g_hat.cwiseProduct(tr.g_hat);
  }
  const Vec mean = s / n;
  const Vec sd = (s2 / n - mean.cwiseProduct(mean)).cwiseSqrt();
  const Vec target = weighted_sum(g, d.p);
  for (int j = 0; j < 20; ++j)
    EXPECT_LE(std::abs(mean(j) - target(j)), 4 * sd(j) / std::sqrt(double(n))) << j;
}

TEST(OtaBound, NoTruncationLimitLeavesNoiseTerm) {
  const auto link = toy_link();
  const auto prof = toy_profiles({1.0, 2.0});
  const auto d = make_ota_design({1e-9, 1e-9}, prof, link);
  const std::vector<double> sigma{0.0, 0.0};
  const double noise = 20.0 * link.noise_psd / (d.alpha * d.alpha);
  EXPECT_NEAR(ota_variance_bound(d, sigma, link), noise, 1e-9 * noise);
}

TEST(OtaBound, DominatesEmpiricalVariance) {
  const auto link = toy_link();
  CounterRng drng(17);
  for (int design = 0; design < 5; ++design) {
    std::vector<double> lam, gam;
    for (int m = 0; m < 5; ++m) lam.push_back(std::pow(10.0, -2 * drng.uniform()));
    const auto prof = toy_profiles(lam);
    for (int m = 0; m < 5; ++m)
      gam.push_back(ota_gamma_max(lam[m], link) * (0.2 + 0.8 * drng.uniform()));
    const auto d = make_ota_design(gam, prof, link);
    const auto g = toy_grads(5, 20, 0.7, 100 + design);
    const Vec target = weighted_sum(g, d.p);
    double sq = 0.0;
    const int n = 10000;
    for (int t = 0; t < n; ++t) {
      CounterRng rng(StreamKey{9, 5, static_cast<std::uint64_t>(t), Purpose::kNoise});
      sq += (ota_round(d, g, draw_round_channels(prof, 9 + design, t), link, rng)
                 .g_hat - target).squaredNorm();
    }
    const std::vector<double> sigma(5, 0.0);
    EXPECT_LE(sq / n, ota_variance_bound(d, sigma, link)) << design;
  }
}

}  // namespace
}  // namespace wfl
