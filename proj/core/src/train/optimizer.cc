// core/src/train/optimizer.cc

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

#include "cabkws/train/optimizer.h"

#include <cmath>

#include "cabkws/common/error.h"

namespace cabkws {

Adam::Adam(const AdamConfig& config, std::size_t size)
    : config_(config), m_(size, 0.0), v_(size, 0.0) {}

void Adam::Step(std::span<float> params, std::span<const float> grads,
                std::span<const uint8_t> trainable) {
  if (params.size() != m_.size() || grads.size() != m_.size())
    throw ShapeError("adam: parameter and gradient sizes differ from optimizer state");
  if (!trainable.empty() && trainable.size() != m_.size())
    throw ShapeError("adam: trainable mask has the wrong size");
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!trainable.empty() && trainable[i] == 0) continue;
    const double g = grads[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    const double update = config_.learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + config_.eps);
    params[i] = static_cast<float>(params[i] - update);
  }
}

double GlobalNorm(std::span<const float> grads) {
  double sum = 0.0;
  for (float g : grads) sum += static_cast<double>(g) * g;
  return std::sqrt(sum);
}

double ClipGlobalNorm(std::span<float> grads, double max_norm) {
  const double norm = GlobalNorm(grads);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (float& g : grads) g = static_cast<float>(g * scale);
  }
  return norm;
}

}  // namespace cabkws
