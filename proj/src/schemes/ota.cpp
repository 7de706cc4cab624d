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

#include "wfl/schemes/ota.hpp"

#include <cmath>
#include <numbers>

namespace wfl {

namespace {

double truncation_scale(double lambda, const LinkBudget& link) {
  return static_cast<double>(link.dim) * lambda * link.energy_per_sample /
         (link.g_max * link.g_max);
}

}  // namespace

double ota_alpha_m(double gamma, double lambda, const LinkBudget& link) {
  return gamma * std::exp(-gamma * gamma / truncation_scale(lambda, link));
}

double ota_gamma_max(double lambda, const LinkBudget& link) {
  return std::sqrt(truncation_scale(lambda, link) / 2.0);
}

double ota_alpha_max(double lambda, const LinkBudget& link) {
  return std::sqrt(truncation_scale(lambda, link) / (2.0 * std::numbers::e));
}

OtaDesign make_ota_design(std::vector<double> gamma,
                          const std::vector<DeviceProfile>& profiles,
                          const LinkBudget& link) {
  if (gamma.size() != profiles.size())
    throw Error(ErrorCode::kInvalidArgument, "one pre-scaler per device");
  OtaDesign d;
  d.gamma = std::move(gamma);
  d.alpha_m.resize(d.gamma.size());
  for (std::size_t m = 0; m < d.gamma.size(); ++m) {
    if (!(d.gamma[m] >= 0.0))
      throw Error(ErrorCode::kDegenerateDesign, "negative pre-scaler");
    d.alpha_m[m] = ota_alpha_m(d.gamma[m], profiles[m].lambda, link);
    d.alpha += d.alpha_m[m];
  }
  if (!(d.alpha > 0.0))
    throw Error(ErrorCode::kDegenerateDesign, "post-scaler alpha is zero");
  d.p.resize(d.gamma.size());
  for (std::size_t m = 0; m < d.gamma.size(); ++m) d.p[m] = d.alpha_m[m] / d.alpha;
  return d;
}

bool ota_indicator(std::complex<double> h, double gamma, const LinkBudget& link) {
  return std::abs(h) >=
         link.g_max * gamma /
             std::sqrt(static_cast<double>(link.dim) * link.energy_per_sample);
}

OtaRoundTranscript ota_round(const OtaDesign& design,
                             std::span<const Vec> grads,
                             const ChannelDraw& channels,
                             const LinkBudget& link, CounterRng& noise_rng,
                             const OtaOptions& options) {
  const std::size_t n = design.size();
  if (grads.size() != n || channels.size() != n)
    throw Error(ErrorCode::kInvalidArgument, "device count mismatch");
  if (!(design.alpha > 0.0))
    throw Error(ErrorCode::kDegenerateDesign, "post-scaler alpha is zero");

  OtaRoundTranscript tr;
  tr.chi.assign(n, 0);
  tr.tx_energy.assign(n, 0.0);
  tr.g_tilde = weighted_sum(grads, design.p);
  tr.latency = static_cast<double>(link.dim) / link.bandwidth_hz;

  if (options.mode == OtaMode::kExpected) {
    tr.chi.assign(n, 1);
    tr.g_hat = tr.g_tilde;
  } else {
    std::vector<double> coef(n, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      if (!ota_indicator(channels[m], design.gamma[m], link)) continue;
      tr.chi[m] = 1;
      coef[m] = design.gamma[m];
      tr.tx_energy[m] = design.gamma[m] * design.gamma[m] *
                        grads[m].squaredNorm() / std::norm(channels[m]);
    }
    tr.g_hat = weighted_sum(grads, coef);
  }
  if (options.noise) {
    const double s = std::sqrt(link.noise_psd);
    Vec z(tr.g_hat.size());
    for (auto& v : z) v = s * noise_rng.normal();
    if (options.mode == OtaMode::kExpected)
      tr.g_hat += z / design.alpha;
    else
      tr.g_hat += z;
  }
  if (options.mode == OtaMode::kChannel) tr.g_hat /= design.alpha;
  return tr;
}

double ota_variance_bound(const OtaDesign& design, std::span<const double> sigma,
                          const LinkBudget& link) {
  const double g2 = link.g_max * link.g_max;
  double z = 0.0;
  for (std::size_t m = 0; m < design.size(); ++m) {
    const double p2 = design.p[m] * design.p[m];
    if (design.alpha_m[m] > 0.0)
      z += p2 * g2 * (design.gamma[m] / design.alpha_m[m] - 1.0);
    z += p2 * sigma[m] * sigma[m];
  }
  return z + static_cast<double>(link.dim) * link.noise_psd /
                 (design.alpha * design.alpha);
}

}  // namespace wfl
