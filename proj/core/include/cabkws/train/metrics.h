// core/include/cabkws/train/metrics.h

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

#ifndef CABKWS_TRAIN_METRICS_H_
#define CABKWS_TRAIN_METRICS_H_

#include <fstream>
#include <optional>
#include <string>

#include "cabkws/loss/losses.h"

namespace cabkws {

struct StepMetrics {
  int step = 0;
  LossBreakdown loss;
  double grad_norm = 0.0;
  double ms = 0.0;
  std::optional<double> dev_acc;
};

// One JSON object per line, keys in the order step, l_sim, l_x, l_x_aug,
// l_z, l_theta, l_dual, l_ul, l_ce, grad_norm, ms[, dev_acc].
std::string FormatMetricsLine(const StepMetrics& m);

// Appends lines to a file, flushing after each one. A default-constructed
// writer discards everything.
class MetricsWriter {
 public:
  MetricsWriter() = default;
  explicit MetricsWriter(const std::string& path);

  bool is_open() const { return out_.is_open(); }
  void Write(const StepMetrics& m);

 private:
  std::ofstream out_;
};

}  // namespace cabkws

#endif  // CABKWS_TRAIN_METRICS_H_
