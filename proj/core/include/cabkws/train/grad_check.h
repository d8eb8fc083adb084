// core/include/cabkws/train/grad_check.h

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

#ifndef CABKWS_TRAIN_GRAD_CHECK_H_
#define CABKWS_TRAIN_GRAD_CHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cabkws/model/config.h"

namespace cabkws {

enum class GradObjective { kUnsupervised, kCrossEntropy, kCrossEntropyDual };

const char* GradObjectiveName(GradObjective objective);

struct GradCheckOptions {
  int n_coords = 1000;     // per objective; every tensor gets at least one
  int batch = 4;           // samples (per view for the unsupervised objective)
  double step = 1e-4;      // central-difference h
  double tolerance = 1e-4;
  // Denominator floor of the relative error |a - n| / max(|a|, |n|, floor).
  double floor = 1e-6;
  uint64_t seed = 0;
};

struct TensorCheck {
  std::string name;
  int coords = 0;
  double max_rel_err = 0.0;
  double max_abs_grad = 0.0;
  double worst_analytic = 0.0;  // the coordinate with the largest error
  double worst_numeric = 0.0;
};

struct GradCheckReport {
  std::string objective;
  int coords = 0;
  int kinks_resampled = 0;  // coordinates redrawn because +-h crossed a ReLU kink
  int reduced_step = 0;     // coordinates differenced with h/10 or h/100 for the same reason
  double max_rel_err = 0.0;
  std::string worst_tensor;
  std::vector<TensorCheck> tensors;
  bool passed = false;
};

void to_json(nlohmann::json& j, const GradCheckReport& r);

// Compares the analytic gradient of the objective against central
// differences in double precision on random inputs.
GradCheckReport GradCheck(const ModelConfig& config, GradObjective objective,
                          const GradCheckOptions& options);

}  // namespace cabkws

#endif  // CABKWS_TRAIN_GRAD_CHECK_H_
