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

#include "wfl/learning/kernels.hpp"

#include <cmath>
#include <vector>

namespace wfl::kernels {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t block_count(std::size_t n) {
  return (n + kBlockSize - 1) / kBlockSize;
}

std::span<const std::size_t> block_of(std::span<const std::size_t> batch,
                                      std::size_t b) {
  const std::size_t begin = b * kBlockSize;
  const std::size_t len = std::min(kBlockSize, batch.size() - begin);
  return batch.subspan(begin, len);
}

void gather(const Dataset& data, std::span<const std::size_t> rows,
            RowMat& out) {
  out.resize(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(data.dim()));
  for (std::size_t k = 0; k < rows.size(); ++k)
    out.row(static_cast<Eigen::Index>(k)) =
        data.features().row(static_cast<Eigen::Index>(rows[k]));
}

// Row-wise softmax of the logits, in place; returns sum of per-row
// log-sum-exp minus the label logit when `loss_sum` is non-null.
void softmax_rows(Mat& logits, const Dataset& data,
                  std::span<const std::size_t> rows, double* loss_sum) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < logits.rows(); ++k) {
    const int label = data.label(rows[static_cast<std::size_t>(k)]);
    const double zmax = logits.row(k).maxCoeff();
    const double zl = logits(k, label);
    logits.row(k) = (logits.row(k).array() - zmax).exp();
    const double s = logits.row(k).sum();
    acc += zmax + std::log(s) - zl;
    logits.row(k) /= s;
  }
  if (loss_sum) *loss_sum = acc;
}

}  // namespace

void batch_gradient(const LossModel& loss, const Dataset& data,
                    std::span<const std::size_t> batch, const Vec& w,
                    Vec& out) {
  const auto dim = static_cast<Eigen::Index>(data.dim());
  const std::size_t nb = block_count(batch.size());
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  if (loss.kind() == LossKind::kCenterQuadratic) {
    std::vector<Vec> partial(nb);
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < nb; ++b) {
      Vec s = Vec::Zero(dim);
      for (std::size_t i : block_of(batch, b))
        s += data.features().row(static_cast<Eigen::Index>(i)).transpose();
      partial[b] = std::move(s);
    }
    Vec mean = Vec::Zero(dim);
    for (const Vec& s : partial) mean += s;
    out = loss.mu() * (w - mean * inv_n);
    return;
  }

  const int classes = loss.num_classes();
  const Eigen::Map<const Mat> weights(w.data(), dim, classes);
  std::vector<Mat> partial(nb);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < nb; ++b) {
    const auto rows = block_of(batch, b);
    RowMat xb;
    gather(data, rows, xb);
    Mat prob = xb * weights;
    softmax_rows(prob, data, rows, nullptr);
    for (std::size_t k = 0; k < rows.size(); ++k)
      prob(static_cast<Eigen::Index>(k), data.label(rows[k])) -= 1.0;
    partial[b].noalias() = xb.transpose() * prob;
  }
  Mat total = Mat::Zero(dim, classes);
  for (const Mat& g : partial) total += g;
  out = loss.mu() * w;
  out += Eigen::Map<const Vec>(total.data(), total.size()) * inv_n;
}

void batch_gradient_serial(const LossModel& loss, const Dataset& data,
                           std::span<const std::size_t> batch, const Vec& w,
                           Vec& out) {
  out = Vec::Zero(static_cast<Eigen::Index>(loss.param_dim()));
  Vec g;
  for (std::size_t i : batch) {
    loss.sample_gradient(w, data.sample(i), data.label(i), g);
    out += g;
  }
  out /= static_cast<double>(batch.size());
}

double batch_loss(const LossModel& loss, const Dataset& data,
                  std::span<const std::size_t> batch, const Vec& w) {
  const auto dim = static_cast<Eigen::Index>(data.dim());
  const std::size_t nb = block_count(batch.size());
  std::vector<double> partial(nb, 0.0);

  if (loss.kind() == LossKind::kCenterQuadratic) {
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < nb; ++b) {
      double s = 0.0;
      for (std::size_t i : block_of(batch, b))
        s += (w - data.features().row(static_cast<Eigen::Index>(i)).transpose())
                 .squaredNorm();
      partial[b] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return 0.5 * loss.mu() * total / static_cast<double>(batch.size());
  }

  const Eigen::Map<const Mat> weights(w.data(), dim, loss.num_classes());
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < nb; ++b) {
    const auto rows = block_of(batch, b);
    RowMat xb;
    gather(data, rows, xb);
    Mat z = xb * weights;
    softmax_rows(z, data, rows, &partial[b]);
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return 0.5 * loss.mu() * w.squaredNorm() +
         total / static_cast<double>(batch.size());
}

double batch_loss_serial(const LossModel& loss, const Dataset& data,
                         std::span<const std::size_t> batch, const Vec& w) {
  double total = 0.0;
  for (std::size_t i : batch)
    total += loss.sample_loss(w, data.sample(i), data.label(i));
  return total / static_cast<double>(batch.size());
}

std::size_t batch_correct(const LossModel& loss, const Dataset& data,
                          std::span<const std::size_t> batch, const Vec& w) {
  std::size_t correct = 0;
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(static) reduction(+ : correct)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const std::size_t i = batch[static_cast<std::size_t>(k)];
    if (loss.predict(w, data.sample(i)) == data.label(i)) ++correct;
  }
  return correct;
}

}  // namespace wfl::kernels
