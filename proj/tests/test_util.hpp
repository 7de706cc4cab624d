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

#include <memory>
#include <vector>

#include "wfl/learning/problem.hpp"
#include "wfl/sim/data.hpp"

namespace wfl::testing {

/// Small softmax problem with one class per device.
inline FederatedProblem small_softmax(int classes, std::size_t per_class,
                                      std::size_t dim, double mu,
                                      std::uint64_t seed = 7) {
  SyntheticSpec spec;
  spec.classes = classes;
  spec.per_class = per_class;
  spec.dim = dim;
  auto data = std::make_shared<const Dataset>(make_synthetic(spec, seed));
  Partition part(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < data->size(); ++i)
    part[static_cast<std::size_t>(data->label(i))].push_back(i);
  return FederatedProblem(LossModel::softmax(mu, classes, dim + 1), data,
                          std::move(part));
}

/// Quadratic surrogate f_m(w) = mu/2 ||w - c_m||^2: one sample per device,
/// so the sample is the center.
inline FederatedProblem center_problem(const std::vector<Vec>& centers,
                                       double mu) {
  const auto n = static_cast<Eigen::Index>(centers.size());
  const auto d = centers.front().size();
  Dataset::Features f(n, d);
  for (Eigen::Index m = 0; m < n; ++m) f.row(m) = centers[static_cast<std::size_t>(m)];
  auto data = std::make_shared<const Dataset>(
      Dataset(std::move(f), std::vector<int>(centers.size(), 0), 1));
  Partition part(centers.size());
  for (std::size_t m = 0; m < centers.size(); ++m) part[m] = {m};
  return FederatedProblem(
      LossModel::center_quadratic(mu, static_cast<std::size_t>(d)), data,
      std::move(part));
}

inline Vec random_vec(CounterRng& rng, Eigen::Index d, double scale = 1.0) {
  Vec v(d);
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

}  // namespace wfl::testing
