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

#include "wfl/design/objective.hpp"

#include <cmath>

namespace wfl {

BoundReport optimality_error_bound(std::span<const double> p, double zeta,
                           std::size_t t, double diameter, double eta,
                           double mu, double kappa) {
  if (p.empty()) throw Error(ErrorCode::kInvalidArgument, "empty participation");
  if (!(zeta >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative variance");
  const auto n = static_cast<double>(p.size());
  BoundReport r;
  r.t = t;
  r.init_error_term = 2.0 * diameter * diameter *
                      std::pow(1.0 - eta * mu, 2.0 * static_cast<double>(t));
  double dev = 0.0;
  for (double pm : p) dev += (1.0 / n - pm) * (1.0 / n - pm);
  r.bias_term = 2.0 * n * kappa * kappa / (mu * mu) * dev;
  r.variance_term = 2.0 * eta / mu * zeta;
  r.total = r.init_error_term + r.bias_term + r.variance_term;
  return r;
}

std::vector<double> DesignInputs::sigmas() const {
  std::vector<double> s;
  for (const auto& p : profiles) s.push_back(p.sigma);
  return s;
}

void DesignInputs::validate() const {
  validate_profiles(profiles);
  link.validate();
  if (!(mu > 0.0)) throw Error(ErrorCode::kInvalidArgument, "mu must be positive");
  if (!(eta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eta must be positive");
  if (!(kappa >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "kappa must be >= 0");
  if (!(t_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "t_max must be positive");
  if (r_max < 1 || r_max > kMaxQuantBits)
    throw Error(ErrorCode::kInvalidArgument, "r_max out of range");
  if (!(r_min_rate > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "minimum rate must be positive");
}

double bias_penalty(std::span<const double> p, const DesignInputs& in) {
  const auto n = static_cast<double>(p.size());
  double dev = 0.0;
  for (double pm : p) dev += (1.0 / n - pm) * (1.0 / n - pm);
  return n * in.kappa * in.kappa / (in.mu * in.mu) * dev;
}

double ota_objective(const OtaDesign& d, const DesignInputs& in) {
  return in.eta / in.mu * ota_variance_bound(d, in.sigmas(), in.link) +
         bias_penalty(d.p, in);
}

double digital_objective(const DigitalDesign& d, const DesignInputs& in) {
  return in.eta / in.mu * digital_variance_bound(d, in.sigmas(), in.link) +
         bias_penalty(d.p, in);
}

double digital_objective_relaxed(std::span<const double> p,
                                 std::span<const double> beta,
                                 std::span<const double> r_prime,
                                 const DesignInputs& in) {
  const double g2 = in.link.g_max * in.link.g_max;
  const auto d = static_cast<double>(in.link.dim);
  double zeta = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    const double levels = std::exp2(r_prime[m] + 1.0) - 1.0;
    const double p2 = p[m] * p[m];
    const double s = in.profiles[m].sigma;
    zeta += p2 * g2 * (1.0 / beta[m] - 1.0 + d / (beta[m] * levels * levels)) +
            p2 * s * s;
  }
  return in.eta / in.mu * zeta + bias_penalty(p, in);
}

double quantization_objective(std::span<const double> p,
                              std::span<const double> beta,
                              std::span<const double> r_prime) {
  double q = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    const double levels = std::exp2(r_prime[m] + 1.0) - 1.0;
    q += p[m] * p[m] / (beta[m] * levels * levels);
  }
  return q;
}

}  // namespace wfl
