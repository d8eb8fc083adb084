// core/include/cabkws/model/network.h

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

#ifndef CABKWS_MODEL_NETWORK_H_
#define CABKWS_MODEL_NETWORK_H_

#include <cstdint>
#include <span>
#include <vector>

#include "cabkws/audio/fbank.h"
#include "cabkws/model/layers.h"
#include "cabkws/model/params.h"

namespace cabkws {

// Pretrain mode evaluates the reconstruction head; finetune mode omits it.
enum class Mode { kPretrain, kFinetune };

template <typename T>
struct ResidualTrace {
  layers::ConvCache<T> conv1;
  layers::GroupNormCache<T> norm1;
  FeatureMap<T> act1;  // ReLU(norm1(conv1(x)))
  layers::ConvCache<T> conv2;
  layers::GroupNormCache<T> norm2;
  FeatureMap<T> out;  // ReLU(norm2(conv2(act1)) + x)
};

template <typename T>
struct EncoderTrace {
  Mat<T> input;
  layers::LayerNormCache<T> ln1;
  Mat<T> ln1_out;
  layers::AttentionCache<T> attn;
  Mat<T> mid;  // input + attention
  layers::LayerNormCache<T> ln2;
  Mat<T> ln2_out;
  Mat<T> hidden;  // ReLU(fc1)
};

// Everything the backward pass needs, for a batch of n inputs.
template <typename T>
struct Trace {
  Mode mode = Mode::kFinetune;
  int n = 0;
  FeatureMap<T> input;                     // n x frames x dim x 1
  std::vector<layers::ConvCache<T>> conv;  // per front-end layer
  std::vector<FeatureMap<T>> conv_out;     // post-ReLU
  std::vector<ResidualTrace<T>> residual;
  layers::SoftPoolCache<T> pool;
  FeatureMap<T> pooled;  // n x P x bins x C
  Mat<T> sequence;       // (n * P) x d_model, positions added
  std::vector<EncoderTrace<T>> encoder;
  Mat<T> e_tran;  // (n * P) x d_model
  Mat<T> e_feat;  // n x (r * d_model)
  Mat<T> e_bn;    // n x U_bn, post-ReLU
  Mat<T> logits;  // n x S
  Mat<T> recon;   // n x U_x; empty in finetune mode

  int pooled_frames() const { return pooled.h; }
  bool has_recon() const { return recon.size() > 0; }
};

// Upstream gradients of the three outputs. Empty matrices mean zero.
template <typename T>
struct OutputGrads {
  Mat<T> d_bn;
  Mat<T> d_logits;
  Mat<T> d_recon;
};

template <typename T>
class Network {
 public:
  explicit Network(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }

  // x holds n stacked input matrices: (n * input_frames) x input_dim.
  Trace<T> Forward(const ParamStore<T>& params, const Mat<T>& x, int n, Mode mode) const;

  // Adds parameter gradients into grads. Throws GraphError when d_recon is
  // given for a finetune-mode trace.
  void Backward(const ParamStore<T>& params, const Trace<T>& trace,
                const OutputGrads<T>& grads, ParamStore<T>* param_grads) const;

  // Sign pattern of every ReLU input in the trace, used to detect kinks
  // between two nearby parameter settings.
  static std::vector<uint8_t> ActivationSignature(const Trace<T>& trace);

 private:
  ModelConfig config_;
  Mat<T> position_;  // PooledFrames x d_model
};

// Stacks equal-shape feature matrices into a network input.
template <typename T>
Mat<T> StackFeatures(std::span<const FbankMatrix> features);

// (n * P * W) x C map -> (n * P) x (C * W), element (c, f) at column c * W + f.
template <typename T>
Mat<T> MapToSequence(const FeatureMap<T>& map);
template <typename T>
FeatureMap<T> SequenceToMap(const Mat<T>& seq, int n, int frames, int bins, int channels);

// Concatenates the last r rows of each sample's sequence.
template <typename T>
Mat<T> SelectFrames(const Mat<T>& seq, int n, int len, int r);

}  // namespace cabkws

#endif  // CABKWS_MODEL_NETWORK_H_
