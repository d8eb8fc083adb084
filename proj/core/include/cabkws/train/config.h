// core/include/cabkws/train/config.h

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

#ifndef CABKWS_TRAIN_CONFIG_H_
#define CABKWS_TRAIN_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cabkws/audio/augment.h"
#include "cabkws/data/batch.h"
#include "cabkws/data/synth.h"
#include "cabkws/model/config.h"

namespace cabkws {

struct TrainConfig {
  // Adam.
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;

  int batch_size = 32;
  int pretrain_steps = 1000;
  int finetune_steps = 2000;
  uint64_t seed = 0;
  int eval_every = 100;  // dev evaluation and checkpoint interval
  double grad_clip_norm = 5.0;
  int eval_batch = 64;   // forward chunk size during evaluation

  bool finetune_dual = false;  // add lambda_dual * L_dual to CE
  bool freeze = false;         // fine-tune only bn.* and proj.*
  bool record_time = false;    // write wall-clock ms into metrics (else 0)

  void Validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct AugmentConfig {
  double speed_min = 0.8;
  double speed_max = 1.2;
  double volume_min = 0.5;
  double volume_max = 1.5;
  double snr_min_db = 0.0;
  double snr_max_db = 20.0;
  bool add_noise = true;

  AugmentRanges Ranges() const;
  BatchOptions Options() const;
  void Validate() const;
  bool operator==(const AugmentConfig&) const = default;
};

struct DataConfig {
  // Manifest CSV; empty means "synthesize the corpus in memory".
  std::string manifest;
  // Source of pretraining audio; empty means the train split of `manifest`.
  std::string pretrain_manifest;
  // Fine-tune initialization; empty means from scratch.
  std::string init_checkpoint;
  // Checkpoint evaluated by the eval command.
  std::string checkpoint;
  std::string eval_split = "eval";
  // Labeled examples kept per class for fine-tuning (0 keeps all).
  int labeled_per_class = 0;

  int synth_classes = 12;
  int synth_train_per_class = 200;
  int synth_dev_per_class = 50;
  int synth_eval_per_class = 50;
  uint64_t synth_seed = 0;

  SynthSpec Synth() const;
  void Validate() const;
  bool operator==(const DataConfig&) const = default;
};

// Everything a command needs, as one strict JSON document with sections
// model, train, data and augment.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  DataConfig data;
  AugmentConfig augment;

  void Validate() const;
  bool operator==(const RunConfig&) const = default;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);
void to_json(nlohmann::json& j, const AugmentConfig& c);
void from_json(const nlohmann::json& j, AugmentConfig& c);
void to_json(nlohmann::json& j, const DataConfig& c);
void from_json(const nlohmann::json& j, DataConfig& c);
void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

// Sets doc[section][key] from "section.key=value" (leading dashes allowed).
// The value is parsed as JSON and falls back to a plain string.
void ApplyOverride(nlohmann::json& doc, const std::string& assignment);

// Parses a config document (empty text means all defaults), applies the
// overrides in order, and validates. Throws ConfigError or ParseError.
RunConfig ParseRunConfig(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig LoadRunConfig(const std::string& path, const std::vector<std::string>& overrides = {});

// Canonical serialization: sorted keys, two-space indent.
std::string DumpRunConfig(const RunConfig& config);

}  // namespace cabkws

#endif  // CABKWS_TRAIN_CONFIG_H_
