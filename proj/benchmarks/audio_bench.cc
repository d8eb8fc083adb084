// benchmarks/audio_bench.cc

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

#include <benchmark/benchmark.h>

#include "cabkws/audio/augment.h"
#include "cabkws/audio/fbank.h"
#include "cabkws/common/random.h"
#include "cabkws/data/synth.h"

namespace cabkws {
namespace {

const Waveform& OneSecond() {
  static const Waveform wave = SynthUtterance(3, 11);
  return wave;
}

void BM_Fbank(benchmark::State& state) {
  const FbankComputer fbank;
  for (auto _ : state) benchmark::DoNotOptimize(fbank.Compute(OneSecond()));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Fbank)->Unit(benchmark::kMicrosecond);

void BM_SpeedPerturb(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(SpeedPerturb(OneSecond(), lambda));
}
BENCHMARK(BM_SpeedPerturb)->Arg(80)->Arg(120)->Unit(benchmark::kMicrosecond);

void BM_MixNoise(benchmark::State& state) {
  const Waveform noise = SynthNoise(NoiseKind::kPink, 60 * 16000, 2);
  uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(MixNoise(OneSecond(), noise, 10.0, seed++));
}
BENCHMARK(BM_MixNoise)->Unit(benchmark::kMicrosecond);

void BM_Augment(benchmark::State& state) {
  const AugmentRanges ranges;
  const Waveform noise = SynthNoise(NoiseKind::kWhite, 16000, 3);
  Rng rng(4);
  for (auto _ : state) {
    const AugmentSpec spec = DrawAugmentSpec(ranges, true, rng);
    benchmark::DoNotOptimize(ApplyAugment(OneSecond(), spec, &noise));
  }
}
BENCHMARK(BM_Augment)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace cabkws
