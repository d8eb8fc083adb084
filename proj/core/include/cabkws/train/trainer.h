// core/include/cabkws/train/trainer.h

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

#ifndef CABKWS_TRAIN_TRAINER_H_
#define CABKWS_TRAIN_TRAINER_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cabkws/data/batch.h"
#include "cabkws/model/checkpoint.h"
#include "cabkws/train/config.h"
#include "cabkws/train/metrics.h"

namespace cabkws {

// Sub-stream tags for DeriveSeed(train.seed, {tag, ...}).
enum SeedTag : uint64_t {
  kSeedInit = 1,
  kSeedPretrainBatch = 2,
  kSeedFinetuneBatch = 3,
  kSeedAgreement = 4,
};

struct PretrainOptions {
  std::string out_dir;              // metrics and checkpoints; empty writes nothing
  std::vector<int> snapshot_steps;  // parameter copies kept in the result
};

struct PretrainResult {
  Checkpoint checkpoint;  // parameters after the last step
  std::vector<StepMetrics> metrics;
  std::map<int, ParamStore<float>> snapshots;
};

// Minimizes l_ul over batches drawn from pool. Writes
// <out>/pretrain_metrics.jsonl and <out>/pretrain.ckpt (every eval_every
// steps and at the end). Throws ConfigError on an empty pool.
PretrainResult Pretrain(const Corpus& corpus, std::span<const std::size_t> pool,
                        const ModelConfig& model, const TrainConfig& train,
                        const AugmentConfig& augment, const PretrainOptions& options = {});

struct FinetuneResult {
  Checkpoint best;  // highest dev accuracy (earliest on ties)
  Checkpoint last;
  double best_dev_acc = 0.0;
  int best_step = 0;
  std::vector<StepMetrics> metrics;
};

// Initial fine-tune parameters: fresh init from the seed, with every tensor
// except proj.* copied from init when given.
ParamStore<float> FinetuneStart(const ModelConfig& model, uint64_t seed,
                                const ParamStore<float>* init);

// Throws ConfigError if the checkpoint's architecture differs from model
// (temperature and loss weights may differ).
void CheckCompatible(const ModelConfig& checkpoint_config, const ModelConfig& model);

// Cross-entropy training over train_pool with dev accuracy every
// eval_every steps and after the last step. Writes
// <out>/finetune_metrics.jsonl, <out>/finetune_best.ckpt and
// <out>/finetune_last.ckpt.
FinetuneResult Finetune(const Corpus& corpus, std::span<const std::size_t> train_pool,
                        std::span<const std::size_t> dev_pool, const ModelConfig& model,
                        const TrainConfig& train, const ParamStore<float>* init,
                        const std::string& out_dir = "");

struct EvalResult {
  double accuracy = 0.0;
  int correct = 0;
  int total = 0;
  std::vector<std::vector<int>> confusion;  // [true][predicted]
};

// Argmax accuracy and confusion matrix of logits against labels.
EvalResult ScoreLogits(const Mat<double>& logits, std::span<const int> labels, int n_classes);

// Evaluates labeled entries. Throws DomainError on an empty set.
EvalResult Evaluate(const ModelConfig& model, const ParamStore<float>& params,
                    const Corpus& corpus, std::span<const std::size_t> indices,
                    int chunk = 64, const FeatureCache* cache = nullptr);

struct ViewAgreement {
  double matched = 0.0;     // mean cos(E_bn(clean_i), E_bn(aug_i))
  double mismatched = 0.0;  // mean cos(E_bn(clean_i), E_bn(aug_j)), i != j
};

// Builds one clean/augmented pair per entry with the pretraining protocol.
ViewAgreement MeasureViewAgreement(const ModelConfig& model, const ParamStore<float>& params,
                                   const Corpus& corpus, std::span<const std::size_t> indices,
                                   const AugmentConfig& augment, uint64_t seed);

}  // namespace cabkws

#endif  // CABKWS_TRAIN_TRAINER_H_
