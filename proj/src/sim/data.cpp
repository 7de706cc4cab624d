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

#include "wfl/sim/data.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "wfl/rng.hpp"

namespace wfl {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

IdxHeader parse_header(const std::vector<std::uint8_t>& bytes,
                       const std::string& path) {
  if (bytes.size() < 4)
    throw Error(ErrorCode::kNotIdx, path + ": shorter than a magic number");
  IdxHeader h;
  h.magic = be32(bytes, 0);
  h.file_bytes = bytes.size();
  // Only unsigned-byte payloads with 1 or 3 dimensions are accepted.
  if (h.magic != kImageMagic && h.magic != kLabelMagic)
    throw Error(ErrorCode::kNotIdx, path + ": unexpected magic");
  h.type_code = bytes[2];
  const std::size_t ndim = bytes[3];
  if (bytes.size() < 4 + 4 * ndim)
    throw Error(ErrorCode::kCorruptIdx, path + ": truncated header");
  std::uint64_t payload = 1;
  for (std::size_t k = 0; k < ndim; ++k) {
    h.dims.push_back(be32(bytes, 4 + 4 * k));
    payload *= h.dims.back();
  }
  if (bytes.size() != 4 + 4 * ndim + payload)
    throw Error(ErrorCode::kCorruptIdx,
                path + ": payload size does not match the header");
  return h;
}

}  // namespace

IdxHeader read_idx_header(const std::string& path) {
  return parse_header(slurp(path), path);
}

Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path, int num_classes) {
  const auto img = slurp(images_path);
  const auto lab = slurp(labels_path);
  const IdxHeader hi = parse_header(img, images_path);
  const IdxHeader hl = parse_header(lab, labels_path);
  if (hi.magic != kImageMagic)
    throw Error(ErrorCode::kNotIdx, images_path + ": not an image file");
  if (hl.magic != kLabelMagic)
    throw Error(ErrorCode::kNotIdx, labels_path + ": not a label file");
  if (hi.dims.size() != 3 || hl.dims.size() != 1)
    throw Error(ErrorCode::kCorruptIdx, "unexpected dimension count");
  if (hi.dims[0] != hl.dims[0])
    throw Error(ErrorCode::kCountMismatch, "image and label counts differ");

  const std::size_t n = hi.dims[0];
  const std::size_t pixels = std::size_t{hi.dims[1]} * hi.dims[2];
  Dataset::Features f(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(pixels + 1));
  const std::size_t img_off = 16;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < pixels; ++j)
      f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          img[img_off + i * pixels + j] / 255.0;
    f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(pixels)) = 1.0;
  }
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = lab[8 + i];
    if (labels[i] >= num_classes)
      throw Error(ErrorCode::kCorruptIdx, "label exceeds class count");
  }
  return Dataset(std::move(f), std::move(labels), num_classes);
}

void write_idx_u8(const std::string& path,
                  const std::vector<std::uint32_t>& dims,
                  const std::vector<std::uint8_t>& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  auto put32 = [&](std::uint32_t v) {
    const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                       static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(b, 4);
  };
  put32(0x00000800u | static_cast<std::uint32_t>(dims.size()));
  for (auto d : dims) put32(d);
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
}

std::pair<Dataset, Partition> build_class_partition(const Dataset& data,
                                                    std::size_t per_class,
                                                    std::size_t num_devices,
                                                    std::uint64_t seed) {
  const auto classes = static_cast<std::size_t>(data.num_classes());
  if (num_devices != classes)
    throw Error(ErrorCode::kPartitionArityMismatch,
                "one-class partition needs as many devices as classes");
  if (per_class == 0)
    throw Error(ErrorCode::kInvalidArgument, "per_class must be positive");
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < data.size(); ++i)
    by_class[static_cast<std::size_t>(data.label(i))].push_back(i);

  std::vector<std::size_t> chosen;
  Partition partition(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    auto& pool = by_class[c];
    if (pool.size() < per_class)
      throw Error(ErrorCode::kTooFewSamples,
                  "class " + std::to_string(c) + " has only " +
                      std::to_string(pool.size()) + " samples");
    CounterRng rng(StreamKey{seed, c, 0, Purpose::kData});
    for (std::size_t k = 0; k < per_class; ++k)
      std::swap(pool[k], pool[k + rng.below(pool.size() - k)]);
    std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(per_class));
    for (std::size_t k = 0; k < per_class; ++k) {
      partition[c].push_back(chosen.size());
      chosen.push_back(pool[k]);
    }
  }
  return {data.subset(chosen), std::move(partition)};
}

Dataset make_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.classes < 1 || spec.per_class == 0 || spec.dim == 0)
    throw Error(ErrorCode::kInvalidArgument, "bad synthetic dataset spec");
  const auto classes = static_cast<std::size_t>(spec.classes);
  const std::size_t n = classes * spec.per_class;
  Dataset::Features f(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(spec.dim + 1));
  std::vector<int> labels(n);
  for (std::size_t c = 0; c < classes; ++c) {
    CounterRng rng(StreamKey{seed, c, 0, Purpose::kData});
    Vec center(static_cast<Eigen::Index>(spec.dim));
    for (auto& v : center) v = spec.separation * rng.normal();
    for (std::size_t k = 0; k < spec.per_class; ++k) {
      const auto row = static_cast<Eigen::Index>(c * spec.per_class + k);
      for (Eigen::Index j = 0; j < center.size(); ++j)
        f(row, j) = center(j) + spec.spread * rng.normal();
      f(row, static_cast<Eigen::Index>(spec.dim)) = 1.0;
      labels[static_cast<std::size_t>(row)] = static_cast<int>(c);
    }
  }
  return Dataset(std::move(f), std::move(labels), spec.classes);
}

}  // namespace wfl
