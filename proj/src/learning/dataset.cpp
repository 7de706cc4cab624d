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

#include "wfl/learning/dataset.hpp"

#include <string>

namespace wfl {

Dataset::Dataset(Features features, std::vector<int> labels, int num_classes)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      num_classes_(num_classes) {
  if (labels_.empty())
    throw Error(ErrorCode::kInvalidArgument, "dataset is empty");
  if (static_cast<std::size_t>(features_.rows()) != labels_.size())
    throw Error(ErrorCode::kCountMismatch,
                "feature rows and label count differ");
  if (num_classes_ < 1)
    throw Error(ErrorCode::kInvalidArgument, "num_classes must be >= 1");
  for (int l : labels_) {
    if (l < 0 || l >= num_classes_)
      throw Error(ErrorCode::kInvalidArgument,
                  "label " + std::to_string(l) + " out of range");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Features f(static_cast<Eigen::Index>(indices.size()), features_.cols());
  std::vector<int> l;
  l.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    f.row(static_cast<Eigen::Index>(k)) =
        features_.row(static_cast<Eigen::Index>(indices[k]));
    l.push_back(labels_[indices[k]]);
  }
  return Dataset(std::move(f), std::move(l), num_classes_);
}

void validate_partition(const Partition& partition, const Dataset& data,
                        bool require_cover) {
  if (partition.empty())
    throw Error(ErrorCode::kInvalidArgument, "partition has no devices");
  std::vector<char> seen(data.size(), 0);
  for (std::size_t m = 0; m < partition.size(); ++m) {
    if (partition[m].empty())
      throw Error(ErrorCode::kInvalidArgument,
                  "device " + std::to_string(m) + " holds no samples");
    for (std::size_t i : partition[m]) {
      if (i >= data.size())
        throw Error(ErrorCode::kInvalidArgument, "sample index out of range");
      if (seen[i])
        throw Error(ErrorCode::kInvalidArgument,
                    "sample " + std::to_string(i) + " assigned twice");
      seen[i] = 1;
    }
  }
  if (require_cover) {
    for (char s : seen)
      if (!s)
        throw Error(ErrorCode::kInvalidArgument,
                    "partition does not cover the dataset");
  }
}

}  // namespace wfl
