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

#include "wfl/learning/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wfl/learning/kernels.hpp"

namespace wfl {

FederatedProblem::FederatedProblem(LossModel loss,
                                   std::shared_ptr<const Dataset> data,
                                   Partition partition)
    : loss_(loss), data_(std::move(data)), partition_(std::move(partition)) {
  if (!data_) throw Error(ErrorCode::kInvalidArgument, "null dataset");
  if (data_->dim() != loss_.feature_dim())
    throw Error(ErrorCode::kInvalidArgument,
                "dataset dimension does not match the loss");
  if (loss_.kind() == LossKind::kSoftmaxCrossEntropy &&
      data_->num_classes() != loss_.num_classes())
    throw Error(ErrorCode::kInvalidArgument, "class count mismatch");
  validate_partition(partition_, *data_, false);
  owner_.assign(data_->size(), -1);
  for (std::size_t m = 0; m < partition_.size(); ++m)
    for (std::size_t i : partition_[m]) owner_[i] = static_cast<int>(m);
}

Vec FederatedProblem::local_grad(std::size_t m, const Vec& w,
                                 std::span<const std::size_t> batch) const {
  if (batch.empty())
    throw Error(ErrorCode::kEmptyBatch,
                "device " + std::to_string(m) + " got an empty batch");
  for (std::size_t i : batch) {
    if (i >= owner_.size() || owner_[i] != static_cast<int>(m))
      throw Error(ErrorCode::kInvalidArgument,
                  "batch index not held by device " + std::to_string(m));
  }
  Vec g;
  kernels::batch_gradient(loss_, *data_, batch, w, g);
  return g;
}

Vec FederatedProblem::full_local_grad(std::size_t m, const Vec& w) const {
  Vec g;
  kernels::batch_gradient(loss_, *data_, partition_[m], w, g);
  return g;
}

double FederatedProblem::local_objective(std::size_t m, const Vec& w) const {
  return kernels::batch_loss(loss_, *data_, partition_[m], w);
}

double FederatedProblem::weighted_objective(
    const Vec& w, std::span<const double> weights) const {
  double f = 0.0;
  for (std::size_t m = 0; m < partition_.size(); ++m)
    if (weights[m] != 0.0) f += weights[m] * local_objective(m, w);
  return f;
}

Vec FederatedProblem::weighted_gradient(const Vec& w,
                                        std::span<const double> weights) const {
  Vec g = Vec::Zero(static_cast<Eigen::Index>(param_dim()));
  for (std::size_t m = 0; m < partition_.size(); ++m)
    if (weights[m] != 0.0) g += weights[m] * full_local_grad(m, w);
  return g;
}

double FederatedProblem::global_objective(const Vec& w) const {
  const std::vector<double> uniform(num_devices(),
                                    1.0 / static_cast<double>(num_devices()));
  return weighted_objective(w, uniform);
}

double FederatedProblem::accuracy(const Vec& w) const {
  std::size_t correct = 0;
  std::size_t total = 0;
  for (const auto& local : partition_) {
    correct += kernels::batch_correct(loss_, *data_, local, w);
    total += local.size();
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

Vec project_to_ball(const Vec& w, double radius) {
  const double norm = w.norm();
  if (norm <= radius) return w;
  return w * (radius / norm);
}

double compute_w_radius(const FederatedProblem& problem) {
  const Vec zero = Vec::Zero(static_cast<Eigen::Index>(problem.param_dim()));
  double best = 0.0;
  for (std::size_t m = 0; m < problem.num_devices(); ++m)
    best = std::max(best, problem.full_local_grad(m, zero).norm());
  if (!(best > 0.0))
    throw Error(ErrorCode::kDegenerateData,
                "all local gradients vanish at w = 0");
  return best / problem.loss().mu();
}

double estimate_smoothness(const FederatedProblem& problem) {
  const LossModel& loss = problem.loss();
  if (loss.kind() == LossKind::kCenterQuadratic) return loss.mu();
  double lambda = 0.0;
  for (std::size_t m = 0; m < problem.num_devices(); ++m) {
    const auto local = problem.local_samples(m);
    Mat x(static_cast<Eigen::Index>(local.size()),
          static_cast<Eigen::Index>(problem.data().dim()));
    for (std::size_t k = 0; k < local.size(); ++k)
      x.row(static_cast<Eigen::Index>(k)) =
          problem.data().features().row(static_cast<Eigen::Index>(local[k]));
    const Mat gram = x.rows() <= x.cols() ? Mat(x * x.transpose())
                                          : Mat(x.transpose() * x);
    Eigen::SelfAdjointEigenSolver<Mat> eig(gram, Eigen::EigenvaluesOnly);
    lambda = std::max(lambda, eig.eigenvalues().maxCoeff() /
                                  static_cast<double>(local.size()));
  }
  return loss.mu() + 0.5 * lambda;
}

namespace {

void check_simplex(std::span<const double> weights, std::size_t n) {
  if (weights.size() != n)
    throw Error(ErrorCode::kInvalidWeights, "weight count != device count");
  double sum = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0) || v > 1.0)
      throw Error(ErrorCode::kInvalidWeights, "weight outside [0, 1]");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::kInvalidWeights, "weights do not sum to one");
}

}  // namespace

Vec solve_centralized(const FederatedProblem& problem,
                      std::span<const double> weights,
                      const CentralizedOptions& options) {
  check_simplex(weights, problem.num_devices());
  if (!(options.tol > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  const double mu = problem.loss().mu();
  const double smooth = options.smoothness.value_or(estimate_smoothness(problem));

  Vec x = options.warm_start.value_or(
      Vec::Zero(static_cast<Eigen::Index>(problem.param_dim())));

  if (options.method == CentralizedMethod::kGradient) {
    const double step = 2.0 / (mu + smooth);
    for (std::size_t k = 0; k < options.max_iterations; ++k) {
      const Vec g = problem.weighted_gradient(x, weights);
      if (g.norm() <= options.tol) return x;
      x -= step * g;
    }
    throw Error(ErrorCode::kNoConvergence, "gradient descent hit the cap");
  }

  const double momentum =
      (std::sqrt(smooth) - std::sqrt(mu)) / (std::sqrt(smooth) + std::sqrt(mu));
  Vec y = x;
  for (std::size_t k = 0; k < options.max_iterations; ++k) {
    const Vec g = problem.weighted_gradient(y, weights);
    if (g.norm() <= options.tol) return y;
    Vec next = y - g / smooth;
    // Gradient-based restart keeps the method monotone-ish when the
    // momentum overshoots.
    if (g.dot(next - x) > 0.0) {
      y = next;
    } else {
      y = next + momentum * (next - x);
    }
    x = std::move(next);
  }
  throw Error(ErrorCode::kNoConvergence, "accelerated descent hit the cap");
}

double compute_kappa(const FederatedProblem& problem, const Vec& w_star) {
  double sum = 0.0;
  for (std::size_t m = 0; m < problem.num_devices(); ++m)
    sum += problem.full_local_grad(m, w_star).squaredNorm();
  return std::sqrt(sum / static_cast<double>(problem.num_devices()));
}

double probe_max_sample_gradient(const FederatedProblem& problem,
                                 double radius, std::size_t probes,
                                 CounterRng& rng) {
  std::vector<std::size_t> pool;
  for (const auto& local : problem.partition())
    pool.insert(pool.end(), local.begin(), local.end());
  const auto d = static_cast<Eigen::Index>(problem.param_dim());
  double best = 0.0;
  Vec w(d), g;
  for (std::size_t k = 0; k < probes; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) w(j) = rng.normal();
    const double r =
        radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    w *= r / w.norm();
    const std::size_t i = pool[rng.below(pool.size())];
    problem.loss().sample_gradient(w, problem.data().sample(i),
                                   problem.data().label(i), g);
    best = std::max(best, g.norm());
  }
  return best;
}

void audit_gmax(const FederatedProblem& problem, double radius, double g_max,
                std::size_t probes, CounterRng& rng) {
  const double seen = probe_max_sample_gradient(problem, radius, probes, rng);
  if (seen > g_max)
    throw Error(ErrorCode::kGmaxAuditFailed,
                "observed sample gradient norm " + std::to_string(seen) +
                    " exceeds G_max " + std::to_string(g_max));
}

std::vector<std::size_t> sample_batch(const FederatedProblem& problem,
                                      std::size_t m, std::size_t size,
                                      CounterRng& rng) {
  const auto local = problem.local_samples(m);
  if (size == 0) throw Error(ErrorCode::kEmptyBatch, "batch size is zero");
  if (size >= local.size()) return {local.begin(), local.end()};
  std::vector<std::size_t> pool(local.begin(), local.end());
  for (std::size_t k = 0; k < size; ++k) {
    const std::size_t j = k + rng.below(pool.size() - k);
    std::swap(pool[k], pool[j]);
  }
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace wfl
