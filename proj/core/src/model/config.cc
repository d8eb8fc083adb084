// core/src/model/config.cc

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

#include "cabkws/model/config.h"

#include <array>
#include <string>

#include "cabkws/common/json_fields.h"

namespace cabkws {
namespace {

using F = json_fields::Field<ModelConfig>;
const std::array<F, 25> kFields = {{
    {"input_frames", &ModelConfig::input_frames},
    {"input_dim", &ModelConfig::input_dim},
    {"conv_layers", &ModelConfig::conv_layers},
    {"kernel", &ModelConfig::kernel},
    {"stride", &ModelConfig::stride},
    {"channels", &ModelConfig::channels},
    {"residual_blocks", &ModelConfig::residual_blocks},
    {"norm_groups", &ModelConfig::norm_groups},
    {"norm_eps", &ModelConfig::norm_eps},
    {"pool_group", &ModelConfig::pool_group},
    {"attn_layers", &ModelConfig::attn_layers},
    {"d_model", &ModelConfig::d_model},
    {"heads", &ModelConfig::heads},
    {"ffn_dim", &ModelConfig::ffn_dim},
    {"ln_eps", &ModelConfig::ln_eps},
    {"positional_encoding", &ModelConfig::positional_encoding},
    {"selected_frames", &ModelConfig::selected_frames},
    {"bottleneck_dim", &ModelConfig::bottleneck_dim},
    {"n_classes", &ModelConfig::n_classes},
    {"recon_dim", &ModelConfig::recon_dim},
    {"temperature", &ModelConfig::temperature},
    {"lambda_sim", &ModelConfig::lambda_sim},
    {"lambda_x", &ModelConfig::lambda_x},
    {"lambda_x_aug", &ModelConfig::lambda_x_aug},
    {"lambda_dual", &ModelConfig::lambda_dual},
}};

int CeilDiv(int a, int b) { return (a + b - 1) / b; }

void Require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError("model config: " + msg);
}

}  // namespace

int ModelConfig::ConvFrames() const {
  int t = input_frames;
  for (int l = 0; l < conv_layers; ++l) t = CeilDiv(t, stride);
  return t;
}

int ModelConfig::ConvBins() const {
  int f = input_dim;
  for (int l = 0; l < conv_layers; ++l) f = CeilDiv(f, stride);
  return f;
}

int ModelConfig::PooledFrames() const { return CeilDiv(ConvFrames(), pool_group); }

void ModelConfig::Validate() const {
  Require(input_frames >= 1 && input_dim >= 1, "input shape must be positive");
  Require(conv_layers >= 1, "conv_layers must be >= 1");
  Require(kernel >= 1 && kernel % 2 == 1, "kernel must be odd and >= 1");
  Require(stride >= 1, "stride must be >= 1");
  Require(channels >= 1, "channels must be >= 1");
  Require(residual_blocks >= 0, "residual_blocks must be >= 0");
  Require(norm_groups >= 1 && channels % norm_groups == 0,
          "channels (" + std::to_string(channels) + ") not divisible by norm_groups (" +
              std::to_string(norm_groups) + ")");
  Require(norm_eps > 0.0 && ln_eps > 0.0, "normalization eps must be > 0");
  Require(pool_group >= 1, "pool_group must be >= 1");
  Require(attn_layers >= 0, "attn_layers must be >= 0");
  Require(heads >= 1 && d_model % heads == 0,
          "d_model (" + std::to_string(d_model) + ") not divisible by heads (" +
              std::to_string(heads) + ")");
  Require(d_model == channels * ConvBins(),
          "d_model must equal channels x post-conv bins (" +
              std::to_string(channels * ConvBins()) + ")");
  Require(ffn_dim >= 1, "ffn_dim must be >= 1");
  Require(selected_frames >= 1 && selected_frames <= PooledFrames(),
          "selected_frames must be in [1, pooled frames = " +
              std::to_string(PooledFrames()) + "]");
  Require(bottleneck_dim >= 1 && n_classes >= 1, "head sizes must be >= 1");
  Require(recon_dim == input_dim, "recon_dim must equal input_dim");
  Require(temperature > 0.0, "temperature must be > 0");
  Require(lambda_sim >= 0.0 && lambda_x >= 0.0 && lambda_x_aug >= 0.0 && lambda_dual >= 0.0,
          "loss weights must be >= 0");
}

ModelConfig ModelConfig::Tiny() {
  ModelConfig c;
  c.input_frames = 24;
  c.input_dim = 16;
  c.channels = 8;
  c.norm_groups = 2;
  c.d_model = 32;  // 8 channels x 4 bins
  c.heads = 2;
  c.ffn_dim = 64;
  c.bottleneck_dim = 16;
  c.n_classes = 3;
  c.recon_dim = 16;
  return c;
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  json_fields::Write<ModelConfig>(j, c, std::span<const F>(kFields));
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  json_fields::Read<ModelConfig>(j, c, std::span<const F>(kFields), "model");
}

}  // namespace cabkws
