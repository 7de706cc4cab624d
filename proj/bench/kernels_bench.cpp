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

// OpenMP batch kernels against their serial references, MNIST-sized:
// 785 features, 10 classes, batch given by the range argument.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "wfl/learning/kernels.hpp"
#include "wfl/sim/data.hpp"

namespace {

struct Fixture {
  wfl::Dataset data;
  wfl::LossModel loss;
  wfl::Vec w;
  std::vector<std::size_t> batch;

  explicit Fixture(std::size_t n)
      : data(make(n)), loss(wfl::LossModel::softmax(0.01, 10, data.dim())) {
    w = wfl::Vec::Constant(static_cast<Eigen::Index>(loss.param_dim()), 1e-3);
    batch.resize(data.size());
    std::iota(batch.begin(), batch.end(), std::size_t{0});
  }

  static wfl::Dataset make(std::size_t n) {
    wfl::SyntheticSpec s;
    s.classes = 10;
    s.per_class = n / 10;
    s.dim = 784;
    return wfl::make_synthetic(s, 1);
  }
};

template <auto Kernel>
void grad(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  wfl::Vec out;
  for (auto _ : state) {
    Kernel(f.loss, f.data, f.batch, f.w, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void loss(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f.loss, f.data, f.batch, f.w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(grad<wfl::kernels::batch_gradient>)->Name("batch_gradient/omp")->Arg(100)->Arg(1000);
BENCHMARK(grad<wfl::kernels::batch_gradient_serial>)->Name("batch_gradient/serial")->Arg(100)->Arg(1000);
BENCHMARK(loss<wfl::kernels::batch_loss>)->Name("batch_loss/omp")->Arg(100)->Arg(1000);
BENCHMARK(loss<wfl::kernels::batch_loss_serial>)->Name("batch_loss/serial")->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
