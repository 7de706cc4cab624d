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

#include "wfl/common.hpp"

namespace wfl {

enum class LossKind {
  /// mu/2 ||w||^2 - log softmax_label(x^T w^(c)); w stacks one block of
  /// length dim_x per class.
  kSoftmaxCrossEntropy,
  /// mu/2 ||w - x||^2; the label is ignored. Used as a strongly convex
  /// surrogate with closed-form minimizers.
  kCenterQuadratic,
};

class LossModel {
 public:
  static LossModel softmax(double mu, int num_classes, std::size_t feature_dim);
  static LossModel center_quadratic(double mu, std::size_t dim);

  LossKind kind() const { return kind_; }
  double mu() const { return mu_; }
  int num_classes() const { return num_classes_; }
  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t param_dim() const;

  double sample_loss(const Vec& w, std::span<const double> x, int label) const;

  /// Writes the per-sample gradient into `grad` (resized as needed).
  void sample_gradient(const Vec& w, std::span<const double> x, int label,
                       Vec& grad) const;

  int predict(const Vec& w, std::span<const double> x) const;

 private:
  LossModel(LossKind kind, double mu, int num_classes, std::size_t feature_dim)
      : kind_(kind), mu_(mu), num_classes_(num_classes),
        feature_dim_(feature_dim) {}

  LossKind kind_;
  double mu_;
  int num_classes_;
  std::size_t feature_dim_;
};

}  // namespace wfl
