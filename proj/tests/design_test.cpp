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
#include <numbers>
#include <sstream>

#include "wfl/design/digital_opt.hpp"
#include "wfl/design/io.hpp"
#include "wfl/design/ota_opt.hpp"
#include "wfl/rng.hpp"

namespace wfl {
namespace {

// Cell-scale radio with devices placed uniformly in the disc.
DesignInputs cell_inputs(std::size_t n, std::uint64_t seed, std::size_t dim = 500,
                         double kappa = 1.0, double tx_power_dbm = 0.0) {
  RadioConfig rc;
  rc.tx_power_dbm = tx_power_dbm;
  CounterRng rng(StreamKey{seed, 0, 0, Purpose::kPlacement});
  DesignInputs in;
  in.profiles = place_devices(n, rc, rng);
  for (auto& p : in.profiles) p.sigma = 2.0;
  in.link.g_max = 10.0;
  in.link.dim = dim;
  in.link.energy_per_sample = rc.energy_per_sample();
  in.link.noise_psd = rc.noise_psd_w();
  in.link.bandwidth_hz = rc.bandwidth_hz;
  in.eta = 0.1;
  in.mu = 1.0;
  in.kappa = kappa;
  in.t_max = 0.02;
  return in;
}

// Unit-scale inputs where every quantity can be checked by hand.
DesignInputs unit_inputs(std::vector<double> lambdas) {
  DesignInputs in;
  for (std::size_t m = 0; m < lambdas.size(); ++m)
    in.profiles.push_back({m, 100.0, lambdas[m], 0.0});
  in.link = {1.0, 4, 1.0, 1e-2, 1.0};
  in.eta = 0.1;
  in.mu = 1.0;
  return in;
}

double relative_excess(double value, double oracle) {
  return (value - oracle) / std::abs(oracle);
}

TEST(OptimalityErrorBound, TermsAndLimits) {
  const std::vector<double> uniform(4, 0.25);
  const BoundReport r = optimality_error_bound(uniform, 3.0, 5, 2.0, 0.1, 1.0, 7.0);
  EXPECT_EQ(r.bias_term, 0.0);
  EXPECT_DOUBLE_EQ(r.variance_term, 2 * 0.1 / 1.0 * 3.0);
  EXPECT_DOUBLE_EQ(r.init_error_term, 2 * 4.0 * std::pow(0.9, 10.0));
  EXPECT_DOUBLE_EQ(r.total, r.init_error_term + r.bias_term + r.variance_term);

  const std::vector<double> skew{0.7, 0.1, 0.1, 0.1};
  EXPECT_EQ(optimality_error_bound(skew, 1.0, 3, 1.0, 0.1, 1.0, 0.0).bias_term, 0.0);
  EXPECT_GT(optimality_error_bound(skew, 1.0, 3, 1.0, 0.1, 1.0, 1.0).bias_term, 0.0);

  const BoundReport far = optimality_error_bound(skew, 1.0, 100000, 1.0, 0.1, 1.0, 1.0);
  EXPECT_LT(far.init_error_term, 1e-300);
  EXPECT_NEAR(far.total, far.bias_term + far.variance_term, 1e-12);
  EXPECT_THROW(optimality_error_bound(skew, -1.0, 3, 1.0, 0.1, 1.0, 1.0), Error);
}

TEST(OtaVariants, MinNoiseVarianceClosedForm) {
  const DesignInputs in = unit_inputs({1.0});
  const OtaDesign d = ota_min_noise_variance(in);
  EXPECT_NEAR(d.gamma[0], std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(d.alpha_m[0], std::sqrt(4.0 / (2 * std::numbers::e)), 1e-12);
}

TEST(OtaVariants, MinNoiseVarianceReachesAlphaMax) {
  const DesignInputs in = cell_inputs(8, 3);
  const OtaDesign d = ota_min_noise_variance(in);
  for (std::size_t m = 0; m < in.size(); ++m) {
    const double amax = ota_alpha_max(in.profiles[m].lambda, in.link);
    EXPECT_NEAR(d.alpha_m[m], amax, 1e-12 * amax);
  }
}

TEST(OtaVariants, MinNoiseVarianceMaximizesAlpha) {
  const DesignInputs in = cell_inputs(5, 4);
  const double best = ota_min_noise_variance(in).alpha;
  CounterRng rng(StreamKey{4, 0, 0, Purpose::kProbe});
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> gamma;
    for (const auto& p : in.profiles)
      gamma.push_back(rng.uniform_open0() * ota_gamma_max(p.lambda, in.link));
    EXPECT_LE(make_ota_design(gamma, in.profiles, in.link).alpha, best * (1 + 1e-12));
  }
}

TEST(OtaVariants, ZeroBiasIsUniform) {
  const DesignInputs in = cell_inputs(10, 5);
  const OtaDesign zb = ota_zero_bias(in, 1e-12);
  const OtaDesign nv = ota_min_noise_variance(in);
  double worst = 0.0;
  for (double p : zb.p) worst = std::max(worst, std::abs(p - 0.1));
  EXPECT_LE(worst, 1e-6);
  EXPECT_LE(bias_penalty(zb.p, in), 1e-9);

  // The device with the smallest peak is the binding one.
  std::size_t binding = 0;
  for (std::size_t m = 1; m < in.size(); ++m)
    if (in.profiles[m].lambda < in.profiles[binding].lambda) binding = m;
  EXPECT_EQ(zb.gamma[binding], nv.gamma[binding]);
  for (std::size_t m = 0; m < in.size(); ++m) EXPECT_LE(zb.gamma[m], nv.gamma[m]);
}

TEST(OtaVariants, HomogeneousZeroBiasEqualsMinNoiseVariance) {
  const DesignInputs in = unit_inputs({2.0, 2.0, 2.0});
  const OtaDesign zb = ota_zero_bias(in);
  const OtaDesign nv = ota_min_noise_variance(in);
  for (std::size_t m = 0; m < 3; ++m) EXPECT_EQ(zb.gamma[m], nv.gamma[m]);
}

TEST(OtaVariants, BisectionRejectsNonPositiveTolerance) {
  EXPECT_THROW(ota_zero_bias(unit_inputs({1.0, 2.0}), 0.0), Error);
}

TEST(OtaSca, SingleDeviceMatchesGridSearch) {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const DesignInputs in = cell_inputs(1, seed);
    const double lam = in.profiles[0].lambda;
    const double gmax = ota_gamma_max(lam, in.link);
    double oracle = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 10000; ++k) {
      const double g = gmax * k / 10000.0;
      oracle = std::min(oracle, ota_objective(make_ota_design({g}, in.profiles, in.link), in));
    }
    const OtaScaResult r = ota_sca(in, ota_zero_bias(in));
    EXPECT_LE(relative_excess(r.objective, oracle), 1e-3) << "seed " << seed;
    EXPECT_DOUBLE_EQ(r.design.p[0], 1.0);
  }
}

TEST(OtaSca, HistoryIsMonotoneAndDesignsFeasible) {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    const DesignInputs in = cell_inputs(6, seed);
    const OtaScaResult r = ota_sca(in, ota_zero_bias(in));
    const auto& h = r.state.objective_history;
    ASSERT_GE(h.size(), 2u);
    for (std::size_t k = 1; k < h.size(); ++k) EXPECT_LE(h[k], h[k - 1] + 1e-9 * std::abs(h[k - 1]));
    EXPECT_DOUBLE_EQ(h.back(), r.objective);
    EXPECT_NEAR(ota_objective(r.design, in), r.objective, 1e-12 * r.objective);
    double psum = 0.0;
    for (std::size_t m = 0; m < in.size(); ++m) {
      EXPECT_GT(r.design.gamma[m], 0.0);
      EXPECT_LE(r.design.gamma[m], ota_gamma_max(in.profiles[m].lambda, in.link));
      psum += r.design.p[m];
    }
    EXPECT_NEAR(psum, 1.0, 1e-12);
    EXPECT_LE(r.state.last_solve.kkt_stationarity_residual, 1e-6);
    EXPECT_EQ(r.state.scheme, ScaState::Scheme::kOta);
  }
}

TEST(OtaSca, LargeKappaForcesUniformParticipation) {
  DesignInputs in = cell_inputs(6, 30);
  const OtaDesign nv = ota_min_noise_variance(in);
  in.kappa = 1e3 * std::sqrt(ota_objective(nv, in));
  const OtaScaResult r = ota_optimized(in);
  for (double p : r.design.p) EXPECT_LE(std::abs(p - 1.0 / 6), 0.05);
}

TEST(OtaSca, RejectsInfeasibleStart) {
  const DesignInputs in = cell_inputs(3, 31);
  OtaDesign bad = ota_min_noise_variance(in);
  bad.gamma[1] *= 1.5;
  try {
    ota_sca(in, bad);
    FAIL() << "expected BadInit";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadInit);
  }
}

TEST(OtaSca, OptimizedBeatsVariants) {
  for (std::uint64_t seed = 40; seed < 44; ++seed) {
    const DesignInputs in = cell_inputs(5, seed, 500, 0.5);
    const OtaScaResult opt = ota_optimized(in);
    EXPECT_LE(opt.objective, ota_objective(ota_zero_bias(in), in));
    EXPECT_LE(opt.objective, ota_objective(ota_min_noise_variance(in), in));
  }
}

TEST(DigitalInit, DefaultIsFeasibleAndRepaired) {
  DesignInputs in = cell_inputs(5, 50, 500, 1.0, 30.0);
  in.t_max = 10.0;
  const DigitalDesign loose = digital_default_init(in);
  for (std::size_t m = 0; m < 5; ++m) {
    EXPECT_EQ(loose.bits[m], 8);
    EXPECT_NEAR(loose.beta[m], 0.8, 1e-15);
    EXPECT_NEAR(loose.nu[m], 4.0, 1e-15);
    EXPECT_NEAR(loose.p[m], 0.2, 1e-15);
  }
  in.t_max = 1e-3;
  const DigitalDesign tight = digital_default_init(in);
  EXPECT_LE(expected_round_latency(tight, in.link), in.t_max);
  EXPECT_LT(tight.bits[0], 8);
  in.t_max = 1e-20;
  EXPECT_THROW(digital_default_init(in), Error);
}

TEST(DigitalInit, WeakLinksLowerBetaToReachMinimumRate) {
  DesignInputs in = cell_inputs(5, 50);
  in.t_max = 10.0;
  const DigitalDesign d = digital_default_init(in);
  for (std::size_t m = 0; m < 5; ++m) {
    EXPECT_GE(d.rate[m], in.r_min_rate);
    EXPECT_LT(d.beta[m], 0.8);
    EXPECT_NEAR(d.p[m], 0.2, 1e-15);
  }
}

TEST(DigitalRepair, DecrementsLargestThenLowestIndex) {
  DesignInputs in = cell_inputs(3, 51);
  const DigitalDesign d = make_digital_design_from_beta(
      {0.5, 0.5, 0.5}, {1.5, 1.5, 1.5}, {6, 9, 9}, in.profiles, in.link);
  const double lat = expected_round_latency(d, in.link);
  in.t_max = lat * 0.999;
  const DigitalDesign fixed = repair_latency(d, in);
  EXPECT_EQ(fixed.bits, (std::vector<int>{6, 8, 9}));
  in.t_max = 1e-20;
  try {
    repair_latency(d, in);
    FAIL() << "expected RoundingInfeasible";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRoundingInfeasible);
  }
}

TEST(DigitalRepair, SlackBuysBitsWithinBudget) {
  DesignInputs in = cell_inputs(3, 52);
  const DigitalDesign d = make_digital_design_from_beta(
      {0.5, 0.5, 0.5}, {1.5, 1.5, 1.5}, {2, 2, 2}, in.profiles, in.link);
  in.t_max = 1e6;
  const DigitalDesign all = fill_latency_slack(d, in);
  EXPECT_EQ(all.bits, std::vector<int>(3, in.r_max));
  in.t_max = expected_round_latency(d, in.link) * 1.5;
  const DigitalDesign some = fill_latency_slack(d, in);
  EXPECT_LE(expected_round_latency(some, in.link), in.t_max);
  EXPECT_LT(digital_objective(some, in), digital_objective(d, in));
  for (std::size_t m = 0; m < 3; ++m) {
    EXPECT_GE(some.bits[m], 2);
    // One more bit anywhere breaks the budget.
    if (some.bits[m] == in.r_max) continue;
    DigitalDesign up = some;
    ++up.bits[m];
    up.payload[m] = payload_bits(in.link.dim, up.bits[m]);
    EXPECT_GT(expected_round_latency(up, in.link), in.t_max);
  }
}

TEST(DigitalSca, SingleDeviceMatchesGridSearch) {
  for (std::uint64_t seed : {60u, 61u}) {
    const DesignInputs in = cell_inputs(1, seed);
    const double lam = in.profiles[0].lambda;
    // rho from the minimum-rate threshold up to beta = 1e-6.
    const double rho_lo = std::sqrt((std::exp2(in.r_min_rate) - 1) * in.link.noise_psd /
                                    in.link.energy_per_sample);
    const double rho_hi = std::sqrt(-lam * std::log(1e-6));
    double oracle = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
      const double rho = rho_lo + (rho_hi - rho_lo) * k / 199.0;
      const double beta = std::exp(-rho * rho / lam);
      for (int r = 1; r <= 16; ++r) {
        const DigitalDesign d = make_digital_design({rho}, {beta}, {r}, in.profiles, in.link);
        if (expected_round_latency(d, in.link) > in.t_max) continue;
        oracle = std::min(oracle, digital_objective(d, in));
      }
    }
    ASSERT_TRUE(std::isfinite(oracle));
    const DigitalScaResult res = digital_sca(in, digital_default_init(in));
    EXPECT_LE(relative_excess(res.objective, oracle), 5e-3) << "seed " << seed;
    EXPECT_LE(expected_round_latency(res.design, in.link), in.t_max);
  }
}

TEST(DigitalSca, HistoryIsMonotoneAndDesignsFeasible) {
  for (std::uint64_t seed = 70; seed < 74; ++seed) {
    const DesignInputs in = cell_inputs(5, seed);
    const DigitalScaResult r = digital_sca(in, digital_default_init(in));
    const auto& h = r.state.objective_history;
    ASSERT_GE(h.size(), 2u);
    for (std::size_t k = 1; k < h.size(); ++k) EXPECT_LE(h[k], h[k - 1] + 1e-9 * std::abs(h[k - 1]));
    EXPECT_LE(expected_round_latency(r.design, in.link), in.t_max);
    double psum = 0.0;
    for (std::size_t m = 0; m < in.size(); ++m) {
      EXPECT_GT(r.design.beta[m], 0.0);
      EXPECT_LE(r.design.beta[m], 1.0);
      EXPECT_GE(r.design.rate[m], in.r_min_rate * (1 - 1e-9));
      EXPECT_GE(r.design.bits[m], 1);
      EXPECT_LE(r.design.bits[m], in.r_max);
      psum += r.design.p[m];
    }
    EXPECT_NEAR(psum, 1.0, 1e-9);
    EXPECT_LE(r.state.last_solve.kkt_stationarity_residual, 1e-6);
    EXPECT_EQ(r.state.scheme, ScaState::Scheme::kDigital);
  }
}

TEST(DigitalSca, UnlimitedLatencyUsesAllBits) {
  DesignInputs in = cell_inputs(4, 80);
  in.kappa = 0.0;
  in.t_max = 1e6;
  const DigitalScaResult r = digital_sca(in, digital_default_init(in));
  for (int b : r.design.bits) EXPECT_EQ(b, in.r_max);
  const DigitalScaResult q = digital_zero_bias_min_quant(in);
  for (int b : q.design.bits) EXPECT_EQ(b, in.r_max);
}

TEST(DigitalVariants, ZeroBiasIdentities) {
  const DesignInputs in = cell_inputs(5, 90);
  const DigitalScaResult zb = digital_zero_bias_optimized(in);
  for (std::size_t m = 0; m < 5; ++m) {
    EXPECT_NEAR(zb.design.p[m], 0.2, 1e-12);
    EXPECT_NEAR(zb.design.nu[m], 5.0 * zb.design.beta[m], 1e-12 * zb.design.nu[m]);
    EXPECT_GT(zb.design.beta[m], 0.0);
    EXPECT_LE(zb.design.beta[m], 1.0);
  }
  EXPECT_LE(bias_penalty(zb.design.p, in), 1e-20);
}

TEST(DigitalVariants, Ordering) {
  for (std::uint64_t seed = 100; seed < 103; ++seed) {
    const DesignInputs in = cell_inputs(5, seed);
    const DigitalScaResult zb = digital_zero_bias_optimized(in);
    const DigitalScaResult zq = digital_zero_bias_min_quant(in);
    const DigitalScaResult opt = digital_optimized(in);
    const auto quant = [](const DigitalDesign& d) {
      std::vector<double> rp;
      for (int b : d.bits) rp.push_back(b - 1.0);
      return quantization_objective(d.p, d.beta, rp);
    };
    EXPECT_LE(quant(zq.design), quant(zb.design) * (1 + 1e-6)) << "seed " << seed;
    EXPECT_LE(opt.objective, zb.objective);
    EXPECT_LE(opt.objective, zq.objective);
    EXPECT_LE(opt.objective, digital_objective(digital_default_init(in), in));
  }
}

TEST(DigitalVariants, SingleDeviceZeroBiasMatchesFull) {
  const DesignInputs in = cell_inputs(1, 110);
  const DigitalScaResult full = digital_sca(in, digital_default_init(in));
  const DigitalScaResult zb = digital_zero_bias_optimized(in);
  EXPECT_NEAR(zb.objective, full.objective, 1e-6 * full.objective);
}

TEST(DesignFile, RoundTripsBothSchemes) {
  const DesignInputs in = cell_inputs(4, 120);
  const OtaDesign ota = ota_zero_bias(in);
  std::stringstream s1(write_design_json(to_design_file(ota, in.profiles, "zero-bias", 1.5),
                                         in.profiles, in.link));
  const DesignFile f1 = read_design_json(s1);
  EXPECT_EQ(f1.source, "zero-bias");
  EXPECT_EQ(ota_from_file(f1, in.profiles, in.link).gamma, ota.gamma);

  const DigitalDesign dig = digital_default_init(in);
  std::stringstream s2(write_design_json(to_design_file(dig, in.profiles, "x", 2.0),
                                         in.profiles, in.link));
  const DesignFile f2 = read_design_json(s2);
  const DigitalDesign back = digital_from_file(f2, in.profiles, in.link);
  EXPECT_EQ(back.rho, dig.rho);
  EXPECT_EQ(back.nu, dig.nu);
  EXPECT_EQ(back.bits, dig.bits);

  EXPECT_THROW(digital_from_file(f1, in.profiles, in.link), Error);
  DesignInputs other = cell_inputs(4, 121);
  EXPECT_THROW(ota_from_file(f1, other.profiles, other.link), Error);
  std::stringstream junk("{\"scheme\": 3}");
  EXPECT_THROW(read_design_json(junk), Error);
}

}  // namespace
}  // namespace wfl
