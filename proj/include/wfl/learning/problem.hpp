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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "wfl/learning/dataset.hpp"
#include "wfl/learning/loss.hpp"
#include "wfl/rng.hpp"

namespace wfl {

/// N devices, each owning a disjoint slice of one dataset, sharing a loss.
/// All member functions are const and thread-safe.
class FederatedProblem {
 public:
  FederatedProblem(LossModel loss, std::shared_ptr<const Dataset> data,
                   Partition partition);

  std::size_t num_devices() const { return partition_.size(); }
  std::size_t param_dim() const { return loss_.param_dim(); }
  const LossModel& loss() const { return loss_; }
  const Dataset& data() const { return *data_; }
  const Partition& partition() const { return partition_; }
  std::span<const std::size_t> local_samples(std::size_t m) const {
    return partition_[m];
  }

  /// Mini-batch gradient g_{m,t}. Throws kEmptyBatch for an empty batch and
  /// kInvalidArgument when an index is not held by device m.
  Vec local_grad(std::size_t m, const Vec& w,
                 std::span<const std::size_t> batch) const;
  Vec full_local_grad(std::size_t m, const Vec& w) const;
  double local_objective(std::size_t m, const Vec& w) const;

  /// sum_m weights_m f_m(w) and its gradient.
  double weighted_objective(const Vec& w, std::span<const double> weights) const;
  Vec weighted_gradient(const Vec& w, std::span<const double> weights) const;

  /// F(w) with uniform weights 1/N.
  double global_objective(const Vec& w) const;

  /// Fraction of all partitioned samples classified correctly.
  double accuracy(const Vec& w) const;

 private:
  LossModel loss_;
  std::shared_ptr<const Dataset> data_;
  Partition partition_;
  std::vector<int> owner_;  // sample index -> device, -1 if unassigned
};

/// Euclidean projection onto the ball of the given radius.
Vec project_to_ball(const Vec& w, double radius);

/// max_m ||grad f_m(0)|| / mu. Throws kDegenerateData when that is zero.
double compute_w_radius(const FederatedProblem& problem);

/// Upper estimate of the smoothness constant of every f_m:
/// mu + 1/2 max_m lambda_max(X_m^T X_m / |D_m|) for softmax (logit Hessian
/// has spectral norm <= 1/2), and mu for the center quadratic.
double estimate_smoothness(const FederatedProblem& problem);

enum class CentralizedMethod {
  kGradient,     // fixed step 2/(mu+L)
  kAccelerated,  // constant-momentum Nesterov for strongly convex objectives
};

struct CentralizedOptions {
  double tol = 1e-9;
  std::size_t max_iterations = 1'000'000;
  CentralizedMethod method = CentralizedMethod::kAccelerated;
  std::optional<Vec> warm_start;
  std::optional<double> smoothness;  // defaults to estimate_smoothness
};

/// Minimizer of sum_m weights_m f_m to gradient-norm tolerance `tol`.
/// Throws kInvalidWeights for non-simplex weights and kNoConvergence when the
/// iteration cap is hit.
Vec solve_centralized(const FederatedProblem& problem,
                      std::span<const double> weights,
                      const CentralizedOptions& options);

/// sqrt( (1/N) sum_m ||grad f_m(w_star)||^2 ).
double compute_kappa(const FederatedProblem& problem, const Vec& w_star);

/// Largest per-sample gradient norm observed over `probes` random pairs of
/// (w drawn uniformly in the ball, sample drawn uniformly).
double probe_max_sample_gradient(const FederatedProblem& problem,
                                 double radius, std::size_t probes,
                                 CounterRng& rng);

/// Throws kGmaxAuditFailed if the probe sweep exceeds g_max.
void audit_gmax(const FederatedProblem& problem, double radius, double g_max,
                std::size_t probes, CounterRng& rng);

/// Uniform sample of `size` local indices of device m, without replacement.
std::vector<std::size_t> sample_batch(const FederatedProblem& problem,
                                      std::size_t m, std::size_t size,
                                      CounterRng& rng);

}  // namespace wfl
