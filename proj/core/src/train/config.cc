// core/src/train/config.cc

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

#include "cabkws/train/config.h"

#include <array>
#include <fstream>
#include <sstream>

#include "cabkws/common/error.h"
#include "cabkws/common/json_fields.h"

namespace cabkws {
namespace {

using TF = json_fields::Field<TrainConfig>;
const std::array<TF, 14> kTrainFields = {{
    {"learning_rate", &TrainConfig::learning_rate},
    {"beta1", &TrainConfig::beta1},
    {"beta2", &TrainConfig::beta2},
    {"adam_eps", &TrainConfig::adam_eps},
    {"batch_size", &TrainConfig::batch_size},
    {"pretrain_steps", &TrainConfig::pretrain_steps},
    {"finetune_steps", &TrainConfig::finetune_steps},
    {"seed", &TrainConfig::seed},
    {"eval_every", &TrainConfig::eval_every},
    {"grad_clip_norm", &TrainConfig::grad_clip_norm},
    {"eval_batch", &TrainConfig::eval_batch},
    {"finetune_dual", &TrainConfig::finetune_dual},
    {"freeze", &TrainConfig::freeze},
    {"record_time", &TrainConfig::record_time},
}};

using AF = json_fields::Field<AugmentConfig>;
const std::array<AF, 7> kAugmentFields = {{
    {"speed_min", &AugmentConfig::speed_min},
    {"speed_max", &AugmentConfig::speed_max},
    {"volume_min", &AugmentConfig::volume_min},
    {"volume_max", &AugmentConfig::volume_max},
    {"snr_min_db", &AugmentConfig::snr_min_db},
    {"snr_max_db", &AugmentConfig::snr_max_db},
    {"add_noise", &AugmentConfig::add_noise},
}};

using DF = json_fields::Field<DataConfig>;
const std::array<DF, 11> kDataFields = {{
    {"manifest", &DataConfig::manifest},
    {"pretrain_manifest", &DataConfig::pretrain_manifest},
    {"init_checkpoint", &DataConfig::init_checkpoint},
    {"checkpoint", &DataConfig::checkpoint},
    {"eval_split", &DataConfig::eval_split},
    {"labeled_per_class", &DataConfig::labeled_per_class},
    {"synth_classes", &DataConfig::synth_classes},
    {"synth_train_per_class", &DataConfig::synth_train_per_class},
    {"synth_dev_per_class", &DataConfig::synth_dev_per_class},
    {"synth_eval_per_class", &DataConfig::synth_eval_per_class},
    {"synth_seed", &DataConfig::synth_seed},
}};

void Require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

void TrainConfig::Validate() const {
  Require(learning_rate > 0, "train.learning_rate must be > 0");
  Require(beta1 >= 0 && beta1 < 1, "train.beta1 must be in [0, 1)");
  Require(beta2 >= 0 && beta2 < 1, "train.beta2 must be in [0, 1)");
  Require(adam_eps > 0, "train.adam_eps must be > 0");
  Require(batch_size >= 1, "train.batch_size must be >= 1");
  Require(pretrain_steps >= 0, "train.pretrain_steps must be >= 0");
  Require(finetune_steps >= 0, "train.finetune_steps must be >= 0");
  Require(eval_every >= 1, "train.eval_every must be >= 1");
  Require(grad_clip_norm > 0, "train.grad_clip_norm must be > 0");
  Require(eval_batch >= 1, "train.eval_batch must be >= 1");
}

AugmentRanges AugmentConfig::Ranges() const {
  AugmentRanges r;
  r.speed_min = speed_min;
  r.speed_max = speed_max;
  r.volume_min = volume_min;
  r.volume_max = volume_max;
  r.snr_min_db = snr_min_db;
  r.snr_max_db = snr_max_db;
  return r;
}

BatchOptions AugmentConfig::Options() const {
  BatchOptions o;
  o.ranges = Ranges();
  o.add_noise = add_noise;
  return o;
}

void AugmentConfig::Validate() const {
  Require(speed_min > 0 && speed_min <= speed_max, "augment: need 0 < speed_min <= speed_max");
  Require(volume_min >= 0 && volume_min <= volume_max,
          "augment: need 0 <= volume_min <= volume_max");
  Require(snr_min_db <= snr_max_db, "augment: need snr_min_db <= snr_max_db");
}

SynthSpec DataConfig::Synth() const {
  SynthSpec s;
  s.n_classes = synth_classes;
  s.train_per_class = synth_train_per_class;
  s.dev_per_class = synth_dev_per_class;
  s.eval_per_class = synth_eval_per_class;
  s.seed = synth_seed;
  return s;
}

void DataConfig::Validate() const {
  Require(labeled_per_class >= 0, "data.labeled_per_class must be >= 0");
  Require(synth_classes >= 1, "data.synth_classes must be >= 1");
  Require(synth_train_per_class >= 1 && synth_dev_per_class >= 0 && synth_eval_per_class >= 0,
          "data: synthetic per-class counts must be >= 1 (train) and >= 0 (dev, eval)");
  Require(eval_split == "train" || eval_split == "dev" || eval_split == "eval",
          "data.eval_split must be train, dev or eval");
}

void RunConfig::Validate() const {
  model.Validate();
  train.Validate();
  data.Validate();
  augment.Validate();
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  json_fields::Write(j, c, std::span<const TF>(kTrainFields));
}
void from_json(const nlohmann::json& j, TrainConfig& c) {
  json_fields::Read(j, c, std::span<const TF>(kTrainFields), "train");
}
void to_json(nlohmann::json& j, const AugmentConfig& c) {
  json_fields::Write(j, c, std::span<const AF>(kAugmentFields));
}
void from_json(const nlohmann::json& j, AugmentConfig& c) {
  json_fields::Read(j, c, std::span<const AF>(kAugmentFields), "augment");
}
void to_json(nlohmann::json& j, const DataConfig& c) {
  json_fields::Write(j, c, std::span<const DF>(kDataFields));
}
void from_json(const nlohmann::json& j, DataConfig& c) {
  json_fields::Read(j, c, std::span<const DF>(kDataFields), "data");
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"model", c.model}, {"train", c.train}, {"data", c.data},
                     {"augment", c.augment}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "model") {
      c.model = value.get<ModelConfig>();
    } else if (key == "train") {
      c.train = value.get<TrainConfig>();
    } else if (key == "data") {
      c.data = value.get<DataConfig>();
    } else if (key == "augment") {
      c.augment = value.get<AugmentConfig>();
    } else {
      throw ConfigError("config: unknown section '" + key + "'");
    }
  }
}

void ApplyOverride(nlohmann::json& doc, const std::string& assignment) {
  std::string s = assignment;
  while (!s.empty() && s.front() == '-') s.erase(s.begin());
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' lacks '='");
  const std::string path = s.substr(0, eq);
  const std::string text = s.substr(eq + 1);
  const auto dot = path.find('.');
  if (dot == std::string::npos || path.find('.', dot + 1) != std::string::npos)
    throw ConfigError("override '" + assignment + "' must look like section.key=value");
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  nlohmann::json value = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;
  if (!doc.is_object()) doc = nlohmann::json::object();
  if (!doc.contains(section)) doc[section] = nlohmann::json::object();
  if (!doc[section].is_object()) throw ConfigError("config: section '" + section + "' is not an object");
  doc[section][key] = std::move(value);
}

RunConfig ParseRunConfig(const std::string& text, const std::vector<std::string>& overrides) {
  nlohmann::json doc = nlohmann::json::object();
  if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("config: ") + e.what());
    }
  }
  for (const auto& o : overrides) ApplyOverride(doc, o);
  RunConfig config;
  try {
    config = doc.get<RunConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  config.Validate();
  return config;
}

RunConfig LoadRunConfig(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseRunConfig(ss.str(), overrides);
}

std::string DumpRunConfig(const RunConfig& config) {
  return nlohmann::json(config).dump(2) + "\n";
}

}  // namespace cabkws
