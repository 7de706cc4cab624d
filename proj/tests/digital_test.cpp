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

#include "wfl/schemes/digital.hpp"

namespace wfl {
namespace {

LinkBudget toy_link() {
  LinkBudget l;
  l.g_max = 1.0;
  l.dim = 20;
  l.energy_per_sample = 1.0;
  l.noise_psd = 1e-2;
  l.bandwidth_hz = 1e4;
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

Vec random_vec(CounterRng& rng, int d, double scale = 1.0) {
  Vec v(d);
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

TEST(Quantizer, GridPointsAreExact) {
  Vec g(6);
  g << -1, 1, 1, -1, -1, 1;
  CounterRng rng(1);
  for (double s : {1.0, 3.5, 1e-7}) {
    const auto q = dithered_quantize(s * g, 1, rng);
    EXPECT_EQ(dequantize(q), s * g);
  }
  Vec h(5);
  h << -3, -1, 1, 3, 0;  // r = 2 grid at linf 3: -3, -1, 1, 3
  const auto q = dithered_quantize(h, 2, rng);
  EXPECT_EQ(dequantize(q).head(4), h.head(4));
}

TEST(Quantizer, ZeroGradient) {
  CounterRng rng(2);
  const auto q = dithered_quantize(Vec::Zero(7), 4, rng);
  EXPECT_EQ(q.linf_norm, 0.0);
  EXPECT_EQ(dequantize(q), Vec::Zero(7));
}

TEST(Quantizer, UnbiasedWithBoundedVariance) {
  const int d = 16;
  CounterRng grng(3);
  const Vec g = random_vec(grng, d);
  const double linf = g.lpNorm<Eigen::Infinity>();
  for (int r : {1, 2, 4, 8}) {
    const int n = 100000;
    Vec s = Vec::Zero(d), s2 = Vec::Zero(d);
    double mse = 0.0;
    for (int t = 0; t < n; ++t) {
      CounterRng rng(StreamKey{4, 0, static_cast<std::uint64_t>(t), Purpose::kDither});
      const Vec e = dequantize(dithered_quantize(g, r, rng)) - g;
      s += e;
      s2 += e.cwiseProduct(e);
      mse += e.squaredNorm();
    }
    const Vec mean = s / n;
    const Vec sd = (s2 / n - mean.cwiseProduct(mean)).cwiseMax(0).cwiseSqrt();
    for (int j = 0; j < d; ++j)
      EXPECT_LE(std::abs(mean(j)), 4 * sd(j) / std::sqrt(double(n)) + 1e-15)
          << "r=" << r << " j=" << j;
    const double levels = std::ldexp(1.0, r) - 1.0;
    EXPECT_LE(mse / n, d * linf * linf / (levels * levels)) << r;
  }
}

TEST(Quantizer, SixteenBitStepBound) {
  CounterRng rng(5);
  const Vec g = random_vec(rng, 50, 4.0);
  const Vec back = dequantize(dithered_quantize(g, 16, rng));
  const double step = 2 * g.lpNorm<Eigen::Infinity>() / 65535.0;
  EXPECT_LE((back - g).lpNorm<Eigen::Infinity>(), step);
}

TEST(Quantizer, OutOfRangeLevelIsCorrupt) {
  QuantizedGradient q;
  q.bits = 3;
  q.linf_norm = 1.0;
  q.levels = {0, 7, 8};
  try {
    dequantize(q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptPayload);
  }
}

TEST(Payload, KnownByteLayout) {
  QuantizedGradient q;
  q.bits = 3;
  q.linf_norm = 1.0;  // 0x3FF0000000000000
  q.levels = {5, 2, 7};  // 101 010 111 -> 10101011 1(0000000)
  const auto b = encode_payload(q);
  const std::vector<std::uint8_t> expect{0x3F, 0xF0, 0, 0, 0, 0, 0, 0, 0xAB, 0x80};
  EXPECT_EQ(b, expect);
  EXPECT_EQ(payload_bits(3, 3), 73u);
}

TEST(Payload, RoundTripAndCorruption) {
  CounterRng rng(6);
  for (int r : {1, 3, 7, 8, 13, 16}) {
    const auto q = dithered_quantize(random_vec(rng, 37), r, rng);
    const auto bytes = encode_payload(q);
    EXPECT_EQ(bytes.size(), (payload_bits(37, r) + 7) / 8);
    const auto back = decode_payload(bytes, 37, r);
    EXPECT_EQ(back.levels, q.levels);
    EXPECT_EQ(back.linf_norm, q.linf_norm);
    auto shorter = bytes;
    shorter.pop_back();
    EXPECT_THROW(decode_payload(shorter, 37, r), Error);
  }
}

TEST(DigitalDesign, DerivedQuantities) {
  const auto link = toy_link();
  const auto prof = toy_profiles({0.5, 2.0});
  const auto d = make_digital_design({0.3, 0.9}, {1.2, 0.9}, {4, 6}, prof, link);
  EXPECT_DOUBLE_EQ(d.beta[0], std::exp(-0.09 / 0.5));
  EXPECT_DOUBLE_EQ(d.p[1], std::exp(-0.81 / 2.0) / 0.9);
  EXPECT_DOUBLE_EQ(d.rate[0], std::log2(1 + 0.09 / 1e-2));
  EXPECT_EQ(d.payload[1], 64u + 20u * 6u);
  const auto e = make_digital_design_from_beta(d.beta, d.nu, d.bits, prof, link);
  for (int m = 0; m < 2; ++m) EXPECT_NEAR(e.rho[m], d.rho[m], 1e-14);
}

TEST(DigitalLatency, Substitution) {
  LinkBudget link = toy_link();
  link.bandwidth_hz = 1.0;
  link.energy_per_sample = 1.0;
  link.noise_psd = 1.0;
  // beta = 0.5 and R = 1 need rho^2 = 1 and lambda = 1/ln 2.
  const auto prof = toy_profiles({1.0 / std::log(2.0)});
  const auto d = make_digital_design({1.0}, {0.5}, {1}, prof, link);
  EXPECT_NEAR(expected_round_latency(d, link), 0.5 * (64 + 20), 1e-12);
  auto bad = d;
  bad.rate[0] = 0.0;
  try {
    expected_round_latency(bad, link);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateRate);
  }
}

TEST(DigitalLatency, Monotonicity) {
  const auto link = toy_link();
  const auto prof = toy_profiles({1.0});
  double prev = 0.0;
  for (int r = 1; r <= 16; ++r) {
    const double t = expected_round_latency(
        make_digital_design({0.5}, {1.0}, {r}, prof, link), link);
    EXPECT_GT(t, prev);
    prev = t;
  }
  double prev_beta = 2.0;
  for (int k = 1; k <= 100; ++k) {
    const auto d = make_digital_design({0.03 * k}, {1.0}, {4}, prof, link);
    EXPECT_LT(d.beta[0], prev_beta);
    prev_beta = d.beta[0];
  }
}

TEST(DigitalBound, Limits) {
  const auto link = toy_link();
  const auto prof = toy_profiles({1.0});
  const std::vector<double> sigma{0.3};
  auto d = make_digital_design({0.0}, {1.0}, {kMaxQuantBits}, prof, link);
  EXPECT_NEAR(digital_variance_bound(d, sigma, link), 0.09, 1e-15);
  const std::vector<double> zero{0.0};
  for (int r : {1, 4, 9}) {
    d = make_digital_design({0.0}, {1.0}, {r}, prof, link);
    const double levels = std::ldexp(1.0, r) - 1;
    EXPECT_DOUBLE_EQ(digital_variance_bound(d, zero, link), 20.0 / (levels * levels));
  }
}

TEST(DigitalRound, ForcedParticipationAveragesWithinStep) {
  const auto link = toy_link();
  const auto prof = toy_profiles({1.0, 1.0, 1.0});
  const auto d = make_digital_design({0.0, 0.0, 0.0}, {3.0, 3.0, 3.0},
                                     {16, 16, 16}, prof, link);
  CounterRng rng(7);
  std::vector<Vec> g{random_vec(rng, 20), random_vec(rng, 20), random_vec(rng, 20)};
  const auto tr = digital_round(d, g, draw_round_channels(prof, 1, 0), link, 1, 0,
                                {true});
  const Vec avg = (g[0] + g[1] + g[2]) / 3.0;
  double step = 0.0;
  for (const auto& v : g) step += 2 * v.lpNorm<Eigen::Infinity>() / 65535.0 / 3.0;
  EXPECT_LE((tr.g_hat - avg).lpNorm<Eigen::Infinity>(), step);
}

TEST(DigitalRound, UnbiasedOutageFreeAndLatency) {
  const auto link = toy_link();
  const auto prof = toy_profiles({0.2, 0.6, 1.5});
  const std::vector<double> beta{0.5, 0.7, 0.9};
  const std::vector<double> nu{0.5 / 0.2, 0.7 / 0.3, 0.9 / 0.5};
  const auto d = make_digital_design_from_beta(beta, nu, {2, 3, 5}, prof, link);
  CounterRng rng(8);
  std::vector<Vec> g{random_vec(rng, 20, 0.2), random_vec(rng, 20, 0.2),
                     random_vec(rng, 20, 0.2)};
  const int n = 100000;
  Vec s = Vec::Zero(20), s2 = Vec::Zero(20);
  double lat = 0.0;
  for (int t = 0; t < n; ++t) {
    const auto h = draw_round_channels(prof, 11, t);
    const auto tr = digital_round(d, g, h, link, 11, t);
    for (int m = 0; m < 3; ++m) {
      if (tr.chi[m]) {
        ASSERT_GE(std::abs(h[m]), d.rho[m]);
        ASSERT_EQ(tr.bits_sent[m], 64u + 20u * d.bits[m]);
      } else {
        ASSERT_EQ(tr.tau[m], 0.0);
      }
    }
    s += tr.g_hat;
    s2 += tr.g_hat.cwiseProduct(tr.g_hat);
    lat += tr.latency;
  }
  const Vec mean = s / n;
  const Vec sd = (s2 / n - mean.cwiseProduct(mean)).cwiseSqrt();
  const Vec target = weighted_sum(g, d.p);
  for (int j = 0; j < 20; ++j)
    EXPECT_LE(std::abs(mean(j) - target(j)), 4 * sd(j) / std::sqrt(double(n)));
  EXPECT_NEAR(lat / n, expected_round_latency(d, link),
              0.01 * expected_round_latency(d, link));
}

TEST(DigitalBound, DominatesEmpiricalVariance) {
  const auto link = toy_link();
  CounterRng drng(19);
  for (int design = 0; design < 5; ++design) {
    std::vector<double> lam, beta, nu;
    std::vector<int> bits;
    std::vector<double> p(5);
    double psum = 0.0;
    for (int m = 0; m < 5; ++m) {
      lam.push_back(std::pow(10.0, -2 * drng.uniform()));
      beta.push_back(0.3 + 0.7 * drng.uniform());
      p[m] = 0.2 + drng.uniform();
      psum += p[m];
      bits.push_back(1 + static_cast<int>(drng.below(6)));
    }
    for (int m = 0; m < 5; ++m) nu.push_back(beta[m] / (p[m] / psum));
    const auto prof = toy_profiles(lam);
    const auto d = make_digital_design_from_beta(beta, nu, bits, prof, link);
    std::vector<Vec> g;
    for (int m = 0; m < 5; ++m) g.push_back(0.7 * random_vec(drng, 20).normalized());
    const Vec target = weighted_sum(g, d.p);
    double sq = 0.0;
    const int n = 10000;
    for (int t = 0; t < n; ++t)
      sq += (digital_round(d, g, draw_round_channels(prof, 30 + design, t), link,
                           30 + design, t).g_hat - target).squaredNorm();
    const std::vector<double> sigma(5, 0.0);
    EXPECT_LE(sq / n, digital_variance_bound(d, sigma, link)) << design;
  }
}

}  // namespace
}  // namespace wfl
