// core/include/cabkws/model/config.h

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

#ifndef CABKWS_MODEL_CONFIG_H_
#define CABKWS_MODEL_CONFIG_H_

#include <nlohmann/json_fwd.hpp>

namespace cabkws {

// Network hyperparameters and unsupervised loss weights. Defaults give the
// 98x40 -> 25x10x32 -> 13x320 -> 640 -> 800 -> 12 (+40) shape chain.
struct ModelConfig {
  int input_frames = 98;
  int input_dim = 40;

  // Compressed convolutional front end.
  int conv_layers = 2;
  int kernel = 3;
  int stride = 2;
  int channels = 32;
  int residual_blocks = 2;
  int norm_groups = 8;
  double norm_eps = 1e-5;
  int pool_group = 2;

  // Transformer encoder (pre-norm, sinusoidal positions).
  int attn_layers = 2;
  int d_model = 320;
  int heads = 4;
  int ffn_dim = 1280;
  double ln_eps = 1e-5;
  bool positional_encoding = true;

  // Decision block.
  int selected_frames = 2;
  int bottleneck_dim = 800;
  int n_classes = 12;
  int recon_dim = 40;

  double temperature = 0.1;
  double lambda_sim = 0.8;
  double lambda_x = 0.05;
  double lambda_x_aug = 0.05;
  double lambda_dual = 0.1;

  // Spatial extents after the strided convolutions and after pooling.
  int ConvFrames() const;
  int ConvBins() const;
  int PooledFrames() const;

  // Throws ConfigError when the shape chain or loss weights are inconsistent.
  void Validate() const;

  // Small configuration for finite-difference checks: 24x16 input,
  // 8 channels in 2 norm groups, d_model 32, 2 heads, 3 classes.
  static ModelConfig Tiny();

  bool operator==(const ModelConfig&) const = default;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
// Missing keys keep their defaults; unknown keys throw ConfigError.
void from_json(const nlohmann::json& j, ModelConfig& c);

}  // namespace cabkws

#endif  // CABKWS_MODEL_CONFIG_H_
