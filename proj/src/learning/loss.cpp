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

#include "wfl/learning/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wfl {

LossModel LossModel::softmax(double mu, int num_classes,
                             std::size_t feature_dim) {
  if (!(mu > 0.0) || num_classes < 2 || feature_dim == 0)
    throw Error(ErrorCode::kInvalidArgument, "bad softmax loss parameters");
  return LossModel(LossKind::kSoftmaxCrossEntropy, mu, num_classes,
                   feature_dim);
}

LossModel LossModel::center_quadratic(double mu, std::size_t dim) {
  if (!(mu > 0.0) || dim == 0)
    throw Error(ErrorCode::kInvalidArgument, "bad quadratic loss parameters");
  return LossModel(LossKind::kCenterQuadratic, mu, 1, dim);
}

std::size_t LossModel::param_dim() const {
  return kind_ == LossKind::kSoftmaxCrossEntropy
             ? static_cast<std::size_t>(num_classes_) * feature_dim_
             : feature_dim_;
}

namespace {

using ConstMap = Eigen::Map<const Eigen::VectorXd>;

// Logits x^T w^(c) for every class.
Vec logits(const Vec& w, std::span<const double> x, int classes,
           std::size_t dim) {
  const ConstMap xv(x.data(), static_cast<Eigen::Index>(dim));
  Eigen::Map<const Mat> blocks(w.data(), static_cast<Eigen::Index>(dim),
                               classes);
  return blocks.transpose() * xv;
}

}  // namespace

double LossModel::sample_loss(const Vec& w, std::span<const double> x,
                              int label) const {
  const ConstMap xv(x.data(), static_cast<Eigen::Index>(feature_dim_));
  if (kind_ == LossKind::kCenterQuadratic)
    return 0.5 * mu_ * (w - xv).squaredNorm();
  const Vec z = logits(w, x, num_classes_, feature_dim_);
  const double zmax = z.maxCoeff();
  const double lse = zmax + std::log((z.array() - zmax).exp().sum());
  return 0.5 * mu_ * w.squaredNorm() + lse - z(label);
}

void LossModel::sample_gradient(const Vec& w, std::span<const double> x,
                                int label, Vec& grad) const {
  const auto dim = static_cast<Eigen::Index>(feature_dim_);
  const ConstMap xv(x.data(), dim);
  if (kind_ == LossKind::kCenterQuadratic) {
    grad = mu_ * (w - xv);
    return;
  }
  Vec prob = logits(w, x, num_classes_, feature_dim_);
  prob.array() -= prob.maxCoeff();
  prob = prob.array().exp();
  prob /= prob.sum();
  prob(label) -= 1.0;
  grad = mu_ * w;
  for (int c = 0; c < num_classes_; ++c)
    grad.segment(c * dim, dim) += prob(c) * xv;
}

int LossModel::predict(const Vec& w, std::span<const double> x) const {
  if (kind_ == LossKind::kCenterQuadratic) return 0;
  const Vec z = logits(w, x, num_classes_, feature_dim_);
  Eigen::Index best = 0;
  z.maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace wfl
