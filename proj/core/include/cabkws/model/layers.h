// core/include/cabkws/model/layers.h

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

#ifndef CABKWS_MODEL_LAYERS_H_
#define CABKWS_MODEL_LAYERS_H_

#include <vector>

#include "cabkws/common/tensor.h"

namespace cabkws {

// Batch of 2-D maps with channels: (n * h * w) x channels, row (b * h + t) * w + f.
template <typename T>
struct FeatureMap {
  int n = 0;
  int h = 0;  // time
  int w = 0;  // frequency
  Mat<T> data;

  int channels() const { return static_cast<int>(data.cols()); }
  static FeatureMap Zeros(int n, int h, int w, int c) {
    return FeatureMap{n, h, w, Mat<T>::Zero(static_cast<Eigen::Index>(n) * h * w, c)};
  }
};

namespace layers {

// "Same" padding: out = ceil(in / stride), padding split with the extra
// element after (TensorFlow convention).
struct ConvGeometry {
  int in_h = 0, in_w = 0, out_h = 0, out_w = 0;
  int pad_top = 0, pad_left = 0;
  int kernel = 0, stride = 0;

  static ConvGeometry Make(int in_h, int in_w, int kernel, int stride);
};

template <typename T>
struct ConvCache {
  ConvGeometry geo;
  int n = 0;
  int cin = 0;
  Mat<T> col;  // im2col matrix, (n * out_h * out_w) x (k * k * cin)
};

template <typename T>
FeatureMap<T> Conv2dForward(const FeatureMap<T>& x, ConstMatMap<T> weight,
                            ConstMatMap<T> bias, int kernel, int stride,
                            ConvCache<T>* cache);

// Adds parameter gradients into dweight/dbias. Returns the input gradient
// (empty when want_dx is false).
template <typename T>
Mat<T> Conv2dBackward(const ConvCache<T>& cache, const Mat<T>& dout,
                      ConstMatMap<T> weight, MatMap<T> dweight, MatMap<T> dbias,
                      bool want_dx);

template <typename T>
void ReluInPlace(Mat<T>& x);

// grad *= (out > 0).
template <typename T>
void ReluBackwardInPlace(Mat<T>& grad, const Mat<T>& out);

template <typename T>
struct GroupNormCache {
  int groups = 0;
  Mat<T> xhat;
  std::vector<T> inv_std;  // per (sample, group)
};

// Normalizes each sample over (positions x channels-in-group), then applies
// per-channel scale and shift.
template <typename T>
FeatureMap<T> GroupNormForward(const FeatureMap<T>& x, int groups, double eps,
                               ConstMatMap<T> scale, ConstMatMap<T> shift,
                               GroupNormCache<T>* cache);

template <typename T>
Mat<T> GroupNormBackward(const GroupNormCache<T>& cache, const FeatureMap<T>& dout,
                         ConstMatMap<T> scale, MatMap<T> dscale, MatMap<T> dshift);

template <typename T>
struct SoftPoolCache {
  int group = 0;
  Mat<T> beta;  // (n * h) x channels pooling weights per input frame
};

// Attention soft-pooling over time. For channel c, frame q scores
// alpha = weight.row(c) . x[q, :, c] + bias[c]; beta = softmax(alpha) inside
// each group of `group` consecutive frames (stride group, last group may be
// short); output frame p = sum_q beta_q x_q.
template <typename T>
FeatureMap<T> SoftPoolForward(const FeatureMap<T>& x, int group, ConstMatMap<T> weight,
                              ConstMatMap<T> bias, SoftPoolCache<T>* cache);

template <typename T>
Mat<T> SoftPoolBackward(const SoftPoolCache<T>& cache, const FeatureMap<T>& x,
                        const FeatureMap<T>& dout, ConstMatMap<T> weight,
                        MatMap<T> dweight, MatMap<T> dbias);

template <typename T>
struct LayerNormCache {
  Mat<T> xhat;
  Vec<T> inv_std;
};

template <typename T>
Mat<T> LayerNormForward(const Mat<T>& x, ConstMatMap<T> gamma, ConstMatMap<T> beta,
                        double eps, LayerNormCache<T>* cache);

template <typename T>
Mat<T> LayerNormBackward(const LayerNormCache<T>& cache, const Mat<T>& dout,
                         ConstMatMap<T> gamma, MatMap<T> dgamma, MatMap<T> dbeta);

// y = x W + b.
template <typename T>
Mat<T> LinearForward(const Mat<T>& x, ConstMatMap<T> weight, ConstMatMap<T> bias);

template <typename T>
Mat<T> LinearBackward(const Mat<T>& x, const Mat<T>& dout, ConstMatMap<T> weight,
                      MatMap<T> dweight, MatMap<T> dbias, bool want_dx = true);

template <typename T>
struct AttentionCache {
  int n = 0, len = 0, heads = 0;
  Mat<T> qkv;      // (n * len) x 3D
  Mat<T> probs;    // (n * heads * len) x len, row-stochastic
  Mat<T> context;  // (n * len) x D, heads concatenated
};

// Multi-head scaled dot-product self-attention within each sample.
template <typename T>
Mat<T> AttentionForward(const Mat<T>& x, int n, int len, int heads,
                        ConstMatMap<T> qkv_weight, ConstMatMap<T> qkv_bias,
                        ConstMatMap<T> out_weight, ConstMatMap<T> out_bias,
                        AttentionCache<T>* cache);

template <typename T>
Mat<T> AttentionBackward(const AttentionCache<T>& cache, const Mat<T>& x,
                         const Mat<T>& dout, ConstMatMap<T> qkv_weight,
                         ConstMatMap<T> out_weight, MatMap<T> dqkv_weight,
                         MatMap<T> dqkv_bias, MatMap<T> dout_weight,
                         MatMap<T> dout_bias);

// PE(p, 2i) = sin(p / 10000^(2i/d)), PE(p, 2i+1) = cos(p / 10000^(2i/d)).
template <typename T>
Mat<T> PositionalEncoding(int len, int d);

}  // namespace layers
}  // namespace cabkws

#endif  // CABKWS_MODEL_LAYERS_H_
