// core/src/train/sweep.cc

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

#include "cabkws/train/sweep.h"

#include <algorithm>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "cabkws/common/error.h"
#include "cabkws/train/trainer.h"

namespace cabkws {

void to_json(nlohmann::json& j, const SweepResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"pretrain_steps", row.pretrain_steps},
                    {"seed", row.seed},
                    {"dev_acc", row.dev_acc},
                    {"eval_acc", row.eval_acc}});
  }
  nlohmann::json means = nlohmann::json::array();
  for (std::size_t i = 0; i < r.counts.size(); ++i)
    means.push_back({{"pretrain_steps", r.counts[i]}, {"mean_eval_acc", r.mean_eval_acc[i]}});
  j = nlohmann::json{{"rows", rows}, {"means", means}};
}

SweepResult StepSweep(const Corpus& corpus, const SweepPools& pools,
                      const std::vector<int>& counts, const std::vector<uint64_t>& seeds,
                      const RunConfig& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (counts.empty() || seeds.empty()) throw ConfigError("sweep: need step counts and seeds");
  for (int c : counts)
    if (c < 0) throw ConfigError("sweep: step counts must be >= 0");
  const int max_count = *std::max_element(counts.begin(), counts.end());

  SweepResult result;
  result.counts = counts;
  result.mean_eval_acc.assign(counts.size(), 0.0);
  for (uint64_t seed : seeds) {
    TrainConfig train = config.train;
    train.seed = seed;
    const std::string seed_dir =
        out_dir.empty() ? "" : (fs::path(out_dir) / ("seed" + std::to_string(seed))).string();

    TrainConfig pre = train;
    pre.pretrain_steps = max_count;
    PretrainOptions options;
    options.snapshot_steps = counts;
    if (!seed_dir.empty()) options.out_dir = (fs::path(seed_dir) / "pretrain").string();
    PretrainResult pretrained;
    if (max_count > 0)
      pretrained = Pretrain(corpus, pools.pretrain, config.model, pre, config.augment, options);

    for (std::size_t i = 0; i < counts.size(); ++i) {
      const int count = counts[i];
      const ParamStore<float>* init = nullptr;
      if (count > 0) init = &pretrained.snapshots.at(count);
      const std::string run_dir =
          seed_dir.empty() ? "" : (fs::path(seed_dir) / ("steps" + std::to_string(count))).string();
      const FinetuneResult ft =
          Finetune(corpus, pools.train, pools.dev, config.model, train, init, run_dir);
      SweepRow row;
      row.pretrain_steps = count;
      row.seed = seed;
      row.dev_acc = ft.best_dev_acc;
      row.eval_acc = Evaluate(config.model, ft.best.params, corpus, pools.eval,
                              train.eval_batch)
                         .accuracy;
      result.rows.push_back(row);
      result.mean_eval_acc[i] += row.eval_acc / static_cast<double>(seeds.size());
    }
  }
  return result;
}

}  // namespace cabkws
