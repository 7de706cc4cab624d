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
#include <vector>

#include "wfl/common.hpp"

namespace wfl {

/// Labelled samples stored row-major: row i is the feature vector of sample i.
class Dataset {
 public:
  using Features =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Dataset(Features features, std::vector<int> labels, int num_classes);

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features_.cols()); }
  int num_classes() const { return num_classes_; }

  const Features& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }

  std::span<const double> sample(std::size_t i) const {
    return {features_.data() + i * dim(), dim()};
  }

  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  Features features_;
  std::vector<int> labels_;
  int num_classes_;
};

/// device index -> sample indices held by that device.
using Partition = std::vector<std::vector<std::size_t>>;

/// Throws kInvalidArgument unless the lists are disjoint, in range and
/// non-empty. With `require_cover` every sample must be assigned.
void validate_partition(const Partition& partition, const Dataset& data,
                        bool require_cover);

}  // namespace wfl
