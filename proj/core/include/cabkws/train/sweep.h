// core/include/cabkws/train/sweep.h

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

#ifndef CABKWS_TRAIN_SWEEP_H_
#define CABKWS_TRAIN_SWEEP_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cabkws/data/corpus.h"
#include "cabkws/train/config.h"

namespace cabkws {

struct SweepPools {
  std::vector<std::size_t> pretrain;  // unlabeled use
  std::vector<std::size_t> train;     // labeled fine-tune entries
  std::vector<std::size_t> dev;
  std::vector<std::size_t> eval;
};

struct SweepRow {
  int pretrain_steps = 0;
  uint64_t seed = 0;
  double dev_acc = 0.0;   // best dev accuracy during fine-tuning
  double eval_acc = 0.0;  // of the best-dev checkpoint
};

struct SweepResult {
  std::vector<SweepRow> rows;        // seed-major, counts in request order
  std::vector<int> counts;
  std::vector<double> mean_eval_acc;  // per count, over seeds
};

void to_json(nlohmann::json& j, const SweepResult& r);

// For every seed: one pretraining run to the largest count, with the
// parameters captured at each requested count (a run of k steps equals the
// first k steps of a longer one), then a fine-tune with the same seed and
// budget from each capture. Count 0 is the from-scratch arm. Writes
// per-run artifacts under out_dir/seed<S>/ when out_dir is set.
SweepResult StepSweep(const Corpus& corpus, const SweepPools& pools,
                      const std::vector<int>& counts, const std::vector<uint64_t>& seeds,
                      const RunConfig& config, const std::string& out_dir = "");

}  // namespace cabkws

#endif  // CABKWS_TRAIN_SWEEP_H_
