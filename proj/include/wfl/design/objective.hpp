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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wfl/schemes/digital.hpp"
#include "wfl/schemes/ota.hpp"
#include "wfl/solver/convex.hpp"
#include "wfl/wireless/env.hpp"

namespace wfl {

/// Optimality-error bound after t rounds, split into its three terms.
struct BoundReport {
  double init_error_term = 0.0;
  double bias_term = 0.0;
  double variance_term = 0.0;
  double total = 0.0;
  std::size_t t = 0;
};

/// init: 2 D^2 (1 - eta mu)^(2t); bias: 2 N kappa^2 / mu^2 sum (1/N - p_m)^2;
/// variance: 2 eta / mu zeta. D is the diameter 2 max_m ||grad f_m(0)|| / mu.
BoundReport optimality_error_bound(std::span<const double> p, double zeta,
                           std::size_t t, double diameter, double eta,
                           double mu, double kappa);

struct DesignInputs {
  std::vector<DeviceProfile> profiles;
  LinkBudget link;
  double eta = 0.0;
  double mu = 0.0;
  double kappa = 0.0;
  // Digital only.
  double t_max = 0.25;  // s
  int r_max = 16;
  double r_min_rate = kMinRate;

  std::size_t size() const { return profiles.size(); }
  std::vector<double> sigmas() const;
  void validate() const;
};

/// N kappa^2 / mu^2 sum (1/N - p_m)^2.
double bias_penalty(std::span<const double> p, const DesignInputs& in);

/// Design objective without the initialization term:
/// eta/mu zeta + N kappa^2/mu^2 sum (1/N - p_m)^2.
double ota_objective(const OtaDesign& d, const DesignInputs& in);
double digital_objective(const DigitalDesign& d, const DesignInputs& in);

/// Digital objective with real-valued r' (effective bits r' + 1).
double digital_objective_relaxed(std::span<const double> p,
                                 std::span<const double> beta,
                                 std::span<const double> r_prime,
                                 const DesignInputs& in);

/// sum p_m / (nu_m (2^(r'_m + 1) - 1)^2), the quantization-only objective.
double quantization_objective(std::span<const double> p,
                              std::span<const double> beta,
                              std::span<const double> r_prime);

struct ScaOptions {
  int max_iterations = 30;  // K
  double rel_tol = 1e-6;
  int patience = 3;  // consecutive small changes before stopping
  SolverOptions solver;
};

struct ScaState {
  enum class Scheme { kOta, kDigital };
  Scheme scheme = Scheme::kOta;
  int iterations = 0;
  /// Monitored objective at the initial point and after every accepted
  /// iterate.
  std::vector<double> objective_history;
  // Last linearization point.
  std::vector<double> p_bar;
  std::vector<double> gamma_bar;  // OTA
  double alpha_bar = 0.0;         // OTA
  std::vector<double> nu_bar;     // digital
  std::vector<double> r_prime_bar;
  // Auxiliaries from the last subproblem.
  std::vector<double> z;
  std::vector<double> omega;
  std::vector<double> t_aux;
  /// Largest relative gap between alpha_m(gamma) and alpha p_m at the last
  /// subproblem solution, closed by the recovery step (OTA).
  double relaxation_gap = 0.0;
  SolverReport last_solve;
  std::string stop_reason;
};

}  // namespace wfl
