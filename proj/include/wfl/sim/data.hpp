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

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wfl/learning/dataset.hpp"

namespace wfl {

struct IdxHeader {
  std::uint32_t magic = 0;
  std::uint8_t type_code = 0;  // 0x08 = unsigned byte
  std::vector<std::uint32_t> dims;
  std::uint64_t file_bytes = 0;
};

/// Reads only the header. Throws kNotIdx for an unknown magic and
/// kCorruptIdx when the payload size does not match the dimensions.
IdxHeader read_idx_header(const std::string& path);

/// MNIST-style image/label pair. Pixels are scaled to [0, 1] and a constant
/// 1.0 feature is appended, so a 28x28 image yields 785 features.
Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path, int num_classes = 10);

/// Writes a u8 IDX file; used by tools and fixtures.
void write_idx_u8(const std::string& path,
                  const std::vector<std::uint32_t>& dims,
                  const std::vector<std::uint8_t>& payload);

/// Draws `per_class` samples of each class and hands class m to device m.
/// The returned dataset is ordered class by class.
std::pair<Dataset, Partition> build_class_partition(const Dataset& data,
                                                    std::size_t per_class,
                                                    std::size_t num_devices,
                                                    std::uint64_t seed);

struct SyntheticSpec {
  int classes = 10;
  std::size_t per_class = 100;
  std::size_t dim = 20;  // raw features; a bias coordinate is appended
  double separation = 1.0;
  double spread = 1.0;
};

/// Gaussian class clusters, ordered class by class.
Dataset make_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace wfl
