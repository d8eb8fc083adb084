// core/include/cabkws/train/optimizer.h

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

#ifndef CABKWS_TRAIN_OPTIMIZER_H_
#define CABKWS_TRAIN_OPTIMIZER_H_

#include <cstdint>
#include <span>
#include <vector>

namespace cabkws {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction:
//   m = b1 m + (1 - b1) g,  v = b2 v + (1 - b2) g^2
//   p -= lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
class Adam {
 public:
  Adam(const AdamConfig& config, std::size_t size);

  // Updates params in place. Entries with trainable[i] == 0 are left alone
  // (an empty mask trains everything).
  void Step(std::span<float> params, std::span<const float> grads,
            std::span<const uint8_t> trainable = {});

  int64_t step() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  int64_t t_ = 0;
};

double GlobalNorm(std::span<const float> grads);

// Rescales grads so their global L2 norm is at most max_norm. Returns the
// norm before clipping.
double ClipGlobalNorm(std::span<float> grads, double max_norm);

}  // namespace cabkws

#endif  // CABKWS_TRAIN_OPTIMIZER_H_
