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

#include "wfl/learning/dataset.hpp"
#include "wfl/learning/loss.hpp"

// Batch kernels over a subset of samples. The default versions split the
// batch into fixed-size blocks processed in parallel with OpenMP and reduce
// the per-block partials in block order, so results are bit-identical for
// any thread count. The *_serial versions are straightforward per-sample
// loops kept as the reference implementation for tests and benchmarks.
namespace wfl::kernels {

inline constexpr std::size_t kBlockSize = 64;

/// Mean per-sample gradient over `batch`.
void batch_gradient(const LossModel& loss, const Dataset& data,
                    std::span<const std::size_t> batch, const Vec& w,
                    Vec& out);
void batch_gradient_serial(const LossModel& loss, const Dataset& data,
                           std::span<const std::size_t> batch, const Vec& w,
                           Vec& out);

/// Mean per-sample loss over `batch`.
double batch_loss(const LossModel& loss, const Dataset& data,
                  std::span<const std::size_t> batch, const Vec& w);
double batch_loss_serial(const LossModel& loss, const Dataset& data,
                         std::span<const std::size_t> batch, const Vec& w);

/// Number of samples in `batch` classified correctly.
std::size_t batch_correct(const LossModel& loss, const Dataset& data,
                          std::span<const std::size_t> batch, const Vec& w);

}  // namespace wfl::kernels
