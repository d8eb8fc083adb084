// core/src/model/params.cc

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

#include "cabkws/model/params.h"

#include <cmath>

#include "cabkws/common/random.h"

namespace cabkws {

ParamLayout::ParamLayout(const ModelConfig& config) : config_(config) {
  config_.Validate();
  const int k2 = config_.kernel * config_.kernel;
  const int c = config_.channels;
  const int d = config_.d_model;

  int cin = 1;
  for (int l = 0; l < config_.conv_layers; ++l) {
    const std::string p = "conv" + std::to_string(l);
    ParamIds::Conv conv{};
    conv.weight = Add(p + ".weight", k2 * cin, c, false, InitKind::kUniform, k2 * cin, k2 * c);
    conv.bias = Add(p + ".bias", 1, c, true, InitKind::kZeros);
    ids_.conv.push_back(conv);
    cin = c;
  }
  for (int b = 0; b < config_.residual_blocks; ++b) {
    const std::string p = "res" + std::to_string(b);
    ParamIds::Residual r{};
    r.conv1.weight = Add(p + ".conv1.weight", k2 * c, c, false, InitKind::kUniform, k2 * c, k2 * c);
    r.conv1.bias = Add(p + ".conv1.bias", 1, c, true, InitKind::kZeros);
    r.norm1_scale = Add(p + ".norm1.scale", 1, c, true, InitKind::kOnes);
    r.norm1_shift = Add(p + ".norm1.shift", 1, c, true, InitKind::kZeros);
    r.conv2.weight = Add(p + ".conv2.weight", k2 * c, c, false, InitKind::kUniform, k2 * c, k2 * c);
    r.conv2.bias = Add(p + ".conv2.bias", 1, c, true, InitKind::kZeros);
    r.norm2_scale = Add(p + ".norm2.scale", 1, c, true, InitKind::kOnes);
    r.norm2_shift = Add(p + ".norm2.shift", 1, c, true, InitKind::kZeros);
    ids_.residual.push_back(r);
  }
  const int bins = config_.ConvBins();
  ids_.pool_weight = Add("pool.weight", c, bins, false, InitKind::kUniform, bins, 1);
  ids_.pool_bias = Add("pool.bias", 1, c, true, InitKind::kZeros);
  for (int m = 0; m < config_.attn_layers; ++m) {
    const std::string p = "enc" + std::to_string(m);
    ParamIds::Encoder e{};
    e.ln1_gamma = Add(p + ".ln1.gamma", 1, d, true, InitKind::kOnes);
    e.ln1_beta = Add(p + ".ln1.beta", 1, d, true, InitKind::kZeros);
    e.qkv_weight = Add(p + ".attn.qkv.weight", d, 3 * d, false, InitKind::kUniform, d, d);
    e.qkv_bias = Add(p + ".attn.qkv.bias", 1, 3 * d, true, InitKind::kZeros);
    e.out_weight = Add(p + ".attn.out.weight", d, d, false, InitKind::kUniform, d, d);
    e.out_bias = Add(p + ".attn.out.bias", 1, d, true, InitKind::kZeros);
    e.ln2_gamma = Add(p + ".ln2.gamma", 1, d, true, InitKind::kOnes);
    e.ln2_beta = Add(p + ".ln2.beta", 1, d, true, InitKind::kZeros);
    e.fc1_weight = Add(p + ".ffn.fc1.weight", d, config_.ffn_dim, false, InitKind::kUniform, d,
                       config_.ffn_dim);
    e.fc1_bias = Add(p + ".ffn.fc1.bias", 1, config_.ffn_dim, true, InitKind::kZeros);
    e.fc2_weight = Add(p + ".ffn.fc2.weight", config_.ffn_dim, d, false, InitKind::kUniform,
                       config_.ffn_dim, d);
    e.fc2_bias = Add(p + ".ffn.fc2.bias", 1, d, true, InitKind::kZeros);
    ids_.encoder.push_back(e);
  }
  const int feat = config_.selected_frames * d;
  const int bn = config_.bottleneck_dim;
  ids_.bn_weight = Add("bn.weight", feat, bn, false, InitKind::kUniform, feat, bn);
  ids_.bn_bias = Add("bn.bias", 1, bn, true, InitKind::kZeros);
  ids_.proj_weight = Add("proj.weight", bn, config_.n_classes, false, InitKind::kUniform, bn,
                         config_.n_classes);
  ids_.proj_bias = Add("proj.bias", 1, config_.n_classes, true, InitKind::kZeros);
  ids_.recon_weight = Add("recon.weight", bn, config_.recon_dim, false, InitKind::kUniform, bn,
                          config_.recon_dim);
  ids_.recon_bias = Add("recon.bias", 1, config_.recon_dim, true, InitKind::kZeros);
}

int ParamLayout::Add(const std::string& name, int rows, int cols, bool is_vector,
                     InitKind init, int fan_in, int fan_out) {
  TensorSpec t;
  t.name = name;
  t.rows = rows;
  t.cols = cols;
  t.is_vector = is_vector;
  t.offset = total_;
  t.init = init;
  t.fan_in = fan_in;
  t.fan_out = fan_out;
  total_ += t.size();
  tensors_.push_back(std::move(t));
  return static_cast<int>(tensors_.size()) - 1;
}

int ParamLayout::Find(const std::string& name) const {
  for (std::size_t i = 0; i < tensors_.size(); ++i)
    if (tensors_[i].name == name) return static_cast<int>(i);
  return -1;
}

template <typename T>
ParamStore<T> InitParams(const ModelConfig& config, uint64_t seed) {
  auto layout = std::make_shared<const ParamLayout>(config);
  ParamStore<T> store(layout);
  for (int id = 0; id < layout->num_tensors(); ++id) {
    const TensorSpec& t = layout->tensor(id);
    auto m = store[id];
    switch (t.init) {
      case InitKind::kZeros:
        m.setZero();
        break;
      case InitKind::kOnes:
        m.setOnes();
        break;
      case InitKind::kUniform: {
        const double s = std::sqrt(6.0 / (t.fan_in + t.fan_out));
        Rng rng(DeriveSeed(seed, {static_cast<uint64_t>(id)}));
        for (int r = 0; r < t.rows; ++r)
          for (int c = 0; c < t.cols; ++c) m(r, c) = static_cast<T>(rng.Uniform(-s, s));
        break;
      }
    }
  }
  return store;
}

template ParamStore<float> InitParams<float>(const ModelConfig&, uint64_t);
template ParamStore<double> InitParams<double>(const ModelConfig&, uint64_t);

}  // namespace cabkws
