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

#include "wfl/schemes/digital.hpp"

#include <cmath>
#include <string>

namespace wfl {

namespace {

void finish(DigitalDesign& d, const std::vector<DeviceProfile>& profiles,
            const LinkBudget& link) {
  const std::size_t n = d.rho.size();
  if (d.nu.size() != n || d.bits.size() != n || profiles.size() != n)
    throw Error(ErrorCode::kInvalidArgument, "digital design size mismatch");
  d.p.resize(n);
  d.rate.resize(n);
  d.payload.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    if (!(d.nu[m] > 0.0))
      throw Error(ErrorCode::kDegenerateDesign, "post-scaler must be positive");
    if (d.bits[m] < 1 || d.bits[m] > kMaxQuantBits)
      throw Error(ErrorCode::kDegenerateDesign, "bit width out of range");
    d.p[m] = d.beta[m] / d.nu[m];
    d.rate[m] = std::log2(1.0 + link.energy_per_sample * d.rho[m] * d.rho[m] /
                                    link.noise_psd);
    d.payload[m] = payload_bits(link.dim, d.bits[m]);
  }
}

}  // namespace

DigitalDesign make_digital_design(std::vector<double> rho,
                                  std::vector<double> nu, std::vector<int> bits,
                                  const std::vector<DeviceProfile>& profiles,
                                  const LinkBudget& link) {
  DigitalDesign d;
  d.rho = std::move(rho);
  d.nu = std::move(nu);
  d.bits = std::move(bits);
  d.beta.resize(d.rho.size());
  for (std::size_t m = 0; m < d.rho.size() && m < profiles.size(); ++m) {
    if (!(d.rho[m] >= 0.0))
      throw Error(ErrorCode::kDegenerateDesign, "negative threshold");
    d.beta[m] = std::exp(-d.rho[m] * d.rho[m] / profiles[m].lambda);
  }
  finish(d, profiles, link);
  return d;
}

DigitalDesign make_digital_design_from_beta(
    const std::vector<double>& beta, std::vector<double> nu,
    std::vector<int> bits, const std::vector<DeviceProfile>& profiles,
    const LinkBudget& link) {
  DigitalDesign d;
  d.beta = beta;
  d.nu = std::move(nu);
  d.bits = std::move(bits);
  d.rho.resize(beta.size());
  for (std::size_t m = 0; m < beta.size() && m < profiles.size(); ++m) {
    if (!(beta[m] > 0.0) || beta[m] > 1.0)
      throw Error(ErrorCode::kDegenerateDesign, "beta must lie in (0, 1]");
    d.rho[m] = std::sqrt(-profiles[m].lambda * std::log(beta[m]));
  }
  finish(d, profiles, link);
  return d;
}

DigitalRoundTranscript digital_round(const DigitalDesign& design,
                                     std::span<const Vec> grads,
                                     const ChannelDraw& channels,
                                     const LinkBudget& link, std::uint64_t seed,
                                     std::uint64_t round,
                                     const DigitalOptions& options) {
  const std::size_t n = design.size();
  if (grads.size() != n || channels.size() != n)
    throw Error(ErrorCode::kInvalidArgument, "device count mismatch");
  DigitalRoundTranscript tr;
  tr.chi.assign(n, 0);
  tr.tau.assign(n, 0.0);
  tr.bits_sent.assign(n, 0);
  tr.g_tilde = weighted_sum(grads, design.p);
  tr.g_hat = Vec::Zero(tr.g_tilde.size());
  for (std::size_t m = 0; m < n; ++m) {
    const bool send =
        options.force_participation || std::abs(channels[m]) >= design.rho[m];
    if (!send) continue;
    tr.chi[m] = 1;
    CounterRng rng(StreamKey{seed, m, round, Purpose::kDither});
    const QuantizedGradient q = dithered_quantize(grads[m], design.bits[m], rng);
    tr.g_hat += dequantize(q) / design.nu[m];
    tr.bits_sent[m] = design.payload[m];
    tr.tau[m] = static_cast<double>(design.payload[m]) /
                (link.bandwidth_hz * design.rate[m]);
    tr.latency += tr.tau[m];
  }
  return tr;
}

double digital_variance_bound(const DigitalDesign& design,
                              std::span<const double> sigma,
                              const LinkBudget& link) {
  const double g2 = link.g_max * link.g_max;
  const auto d = static_cast<double>(link.dim);
  double z = 0.0;
  for (std::size_t m = 0; m < design.size(); ++m) {
    const double p2 = design.p[m] * design.p[m];
    const double levels = std::ldexp(1.0, design.bits[m]) - 1.0;
    z += p2 * g2 * (1.0 / design.beta[m] - 1.0);
    z += p2 * sigma[m] * sigma[m];
    z += p2 * g2 * d / (design.beta[m] * levels * levels);
  }
  return z;
}

double expected_round_latency(const DigitalDesign& design,
                              const LinkBudget& link) {
  double t = 0.0;
  for (std::size_t m = 0; m < design.size(); ++m) {
    if (!(design.rate[m] > 0.0))
      throw Error(ErrorCode::kDegenerateRate,
                  "device " + std::to_string(m) + " has zero rate");
    t += design.beta[m] * static_cast<double>(design.payload[m]) /
         (link.bandwidth_hz * design.rate[m]);
  }
  return t;
}

}  // namespace wfl
