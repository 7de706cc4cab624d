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

#include "wfl/schemes/link.hpp"

#include <cmath>

namespace wfl {

void LinkBudget::validate() const {
  if (!(g_max > 0.0) || dim == 0 || !(energy_per_sample > 0.0) ||
      !(noise_psd > 0.0) || !(bandwidth_hz > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "link budget needs positive entries");
}

Vec weighted_sum(std::span<const Vec> grads, std::span<const double> weights) {
  if (grads.empty() || grads.size() != weights.size())
    throw Error(ErrorCode::kInvalidArgument, "gradient/weight count mismatch");
  Vec out = Vec::Zero(grads.front().size());
  for (std::size_t m = 0; m < grads.size(); ++m) out += weights[m] * grads[m];
  return out;
}

IdealRoundTranscript ideal_round(std::span<const Vec> grads,
                                 const LinkBudget& link) {
  const std::vector<double> w(grads.size(), 1.0 / static_cast<double>(grads.size()));
  return {weighted_sum(grads, w),
          static_cast<double>(link.dim) / link.bandwidth_hz};
}

}  // namespace wfl
