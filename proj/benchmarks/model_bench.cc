// benchmarks/model_bench.cc

// Copyright 2026  The cabkws Authors

// See LICENSE at the repository root for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include <benchmark/benchmark.h>

#include "cabkws/common/random.h"
#include "cabkws/model/network.h"
#include "cabkws/model/params.h"
#include "cabkws/train/objective.h"

namespace cabkws {
namespace {

Mat<float> RandomInput(const ModelConfig& c, int n, uint64_t seed) {
  Rng rng(seed);
  Mat<float> x(n * c.input_frames, c.input_dim);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = static_cast<float>(rng.Uniform(-3, 3));
  return x;
}

// Inference on a batch of n utterances with the default model.
void BM_Forward(benchmark::State& state) {
  const ModelConfig config;
  const Network<float> net(config);
  const ParamStore<float> params = InitParams<float>(config, 1);
  const int n = static_cast<int>(state.range(0));
  const Mat<float> x = RandomInput(config, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(net.Forward(params, x, n, Mode::kFinetune));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(32)->Unit(benchmark::kMillisecond);

// One pretraining objective evaluation with gradients: n clean plus n
// augmented views.
void BM_PretrainStep(benchmark::State& state) {
  const ModelConfig config;
  const Network<float> net(config);
  const ParamStore<float> params = InitParams<float>(config, 1);
  ParamStore<float> grads(params.layout_ptr());
  const int n = static_cast<int>(state.range(0));
  PretrainInputs<float> in;
  in.n = n;
  in.x = RandomInput(config, 2 * n, 3);
  in.clean_mean = Mat<double>::Zero(n, config.recon_dim);
  in.aug_mean = Mat<double>::Zero(n, config.recon_dim);
  for (auto _ : state) {
    grads.SetZero();
    benchmark::DoNotOptimize(PretrainObjective(net, params, in, &grads));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PretrainStep)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FinetuneStep(benchmark::State& state) {
  const ModelConfig config;
  const Network<float> net(config);
  const ParamStore<float> params = InitParams<float>(config, 1);
  ParamStore<float> grads(params.layout_ptr());
  const int n = static_cast<int>(state.range(0));
  FinetuneInputs<float> in;
  in.n = n;
  in.x = RandomInput(config, n, 4);
  for (int i = 0; i < n; ++i) in.labels.push_back(i % config.n_classes);
  for (auto _ : state) {
    grads.SetZero();
    benchmark::DoNotOptimize(FinetuneObjective(net, params, in, false, &grads));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FinetuneStep)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cabkws
