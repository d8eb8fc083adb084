// benchmarks/loss_bench.cc

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
#include "cabkws/loss/losses.h"

namespace cabkws {
namespace {

Mat<double> UnitRows(int n, int d, uint64_t seed) {
  Rng rng(seed);
  Mat<double> m(n, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Uniform(-1, 1);
  m.rowwise().normalize();
  return m;
}

void BM_DualContrast(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mat<double> z = UnitRows(n, 800, 1);
  const Mat<double> theta = UnitRows(n, 800, 2);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i;
  Mat<double> dz, dt;
  for (auto _ : state) {
    benchmark::DoNotOptimize(AnchorContrastZ(z, theta, labels, 0.1,
                                             ContrastMode::kPairedViews, &dz, &dt));
    benchmark::DoNotOptimize(AnchorContrastTheta(z, theta, labels, 0.1,
                                                 ContrastMode::kPairedViews, &dz, &dt));
  }
}
BENCHMARK(BM_DualContrast)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_SupervisedContrast(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mat<double> z = UnitRows(n, 800, 3);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i % 12;
  Mat<double> dz;
  for (auto _ : state) benchmark::DoNotOptimize(SupervisedContrast(z, labels, 0.1, &dz));
}
BENCHMARK(BM_SupervisedContrast)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace cabkws
