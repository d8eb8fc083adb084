// core/src/train/metrics.cc

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

#include "cabkws/train/metrics.h"

#include <nlohmann/json.hpp>

#include "cabkws/common/error.h"

namespace cabkws {

std::string FormatMetricsLine(const StepMetrics& m) {
  nlohmann::ordered_json j;
  j["step"] = m.step;
  j["l_sim"] = m.loss.l_sim;
  j["l_x"] = m.loss.l_x;
  j["l_x_aug"] = m.loss.l_x_aug;
  j["l_z"] = m.loss.l_z;
  j["l_theta"] = m.loss.l_theta;
  j["l_dual"] = m.loss.l_dual;
  j["l_ul"] = m.loss.l_ul;
  j["l_ce"] = m.loss.l_ce;
  j["grad_norm"] = m.grad_norm;
  j["ms"] = m.ms;
  if (m.dev_acc) j["dev_acc"] = *m.dev_acc;
  return j.dump();
}

MetricsWriter::MetricsWriter(const std::string& path) : out_(path, std::ios::trunc) {
  if (!out_) throw IoError("metrics: cannot open " + path);
}

void MetricsWriter::Write(const StepMetrics& m) {
  if (!out_.is_open()) return;
  out_ << FormatMetricsLine(m) << '\n';
  out_.flush();
}

}  // namespace cabkws
