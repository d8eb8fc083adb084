// core/src/model/network.cc

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

#include "cabkws/model/network.h"

#include <string>

#include "cabkws/common/error.h"

namespace cabkws {
namespace {

template <typename T>
void CheckShape(const FeatureMap<T>& m, int h, int w, int c, const char* stage) {
  if (m.h != h || m.w != w || m.channels() != c) {
    throw ShapeError(std::string(stage) + ": expected " + std::to_string(h) + "x" +
                     std::to_string(w) + "x" + std::to_string(c) + ", got " +
                     std::to_string(m.h) + "x" + std::to_string(m.w) + "x" +
                     std::to_string(m.channels()));
  }
}

template <typename T>
void CheckRows(const Mat<T>& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeError(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                     std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
}

template <typename T>
void AppendMask(const Mat<T>& m, std::vector<uint8_t>* out) {
  const T* p = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i) out->push_back(p[i] > T(0) ? 1 : 0);
}

}  // namespace

template <typename T>
Mat<T> StackFeatures(std::span<const FbankMatrix> features) {
  if (features.empty()) return {};
  const Eigen::Index frames = features.front().frames.rows();
  const Eigen::Index dim = features.front().frames.cols();
  Mat<T> x(frames * static_cast<Eigen::Index>(features.size()), dim);
  for (std::size_t i = 0; i < features.size(); ++i) {
    CheckRows(features[i].frames, frames, dim, "stack features");
    x.block(static_cast<Eigen::Index>(i) * frames, 0, frames, dim) =
        features[i].frames.template cast<T>();
  }
  return x;
}

template <typename T>
Mat<T> MapToSequence(const FeatureMap<T>& map) {
  const int c = map.channels();
  Mat<T> seq(static_cast<Eigen::Index>(map.n) * map.h, static_cast<Eigen::Index>(c) * map.w);
  for (Eigen::Index r = 0; r < seq.rows(); ++r) {
    for (int f = 0; f < map.w; ++f) {
      const auto src = map.data.row(r * map.w + f);
      for (int ch = 0; ch < c; ++ch) seq(r, ch * map.w + f) = src(ch);
    }
  }
  return seq;
}

template <typename T>
FeatureMap<T> SequenceToMap(const Mat<T>& seq, int n, int frames, int bins, int channels) {
  CheckRows(seq, static_cast<Eigen::Index>(n) * frames, static_cast<Eigen::Index>(channels) * bins,
            "sequence to map");
  FeatureMap<T> map{n, frames, bins, Mat<T>(static_cast<Eigen::Index>(n) * frames * bins, channels)};
  for (Eigen::Index r = 0; r < seq.rows(); ++r) {
    for (int f = 0; f < bins; ++f) {
      auto dst = map.data.row(r * bins + f);
      for (int ch = 0; ch < channels; ++ch) dst(ch) = seq(r, ch * bins + f);
    }
  }
  return map;
}

template <typename T>
Mat<T> SelectFrames(const Mat<T>& seq, int n, int len, int r) {
  if (r > len) {
    throw ShapeError("feature select: " + std::to_string(r) + " frames requested from a " +
                     std::to_string(len) + "-frame sequence");
  }
  const Eigen::Index d = seq.cols();
  Mat<T> out(n, r * d);
  for (int b = 0; b < n; ++b) {
    for (int k = 0; k < r; ++k) {
      out.block(b, k * d, 1, d) = seq.row(static_cast<Eigen::Index>(b) * len + (len - r + k));
    }
  }
  return out;
}

template <typename T>
Network<T>::Network(const ModelConfig& config) : config_(config) {
  config_.Validate();
  position_ = layers::PositionalEncoding<T>(config_.PooledFrames(), config_.d_model);
}

template <typename T>
Trace<T> Network<T>::Forward(const ParamStore<T>& params, const Mat<T>& x, int n,
                             Mode mode) const {
  const ModelConfig& c = config_;
  const ParamIds& ids = params.layout().ids();
  if (n < 1) throw ShapeError("forward: empty batch");
  CheckRows(x, static_cast<Eigen::Index>(n) * c.input_frames, c.input_dim, "forward input");

  Trace<T> t;
  t.mode = mode;
  t.n = n;
  t.input.n = n;
  t.input.h = c.input_frames;
  t.input.w = c.input_dim;
  t.input.data = ConstMatMap<T>(x.data(), x.size(), 1);

  const FeatureMap<T>* cur = &t.input;
  t.conv.resize(static_cast<std::size_t>(c.conv_layers));
  for (int l = 0; l < c.conv_layers; ++l) {
    const auto& p = ids.conv[static_cast<std::size_t>(l)];
    FeatureMap<T> out = layers::Conv2dForward<T>(*cur, params[p.weight], params[p.bias], c.kernel,
                                                 c.stride, &t.conv[static_cast<std::size_t>(l)]);
    layers::ReluInPlace(out.data);
    t.conv_out.push_back(std::move(out));
    cur = &t.conv_out.back();
  }
  CheckShape(*cur, c.ConvFrames(), c.ConvBins(), c.channels, "front end");

  t.residual.resize(static_cast<std::size_t>(c.residual_blocks));
  for (int b = 0; b < c.residual_blocks; ++b) {
    const auto& p = ids.residual[static_cast<std::size_t>(b)];
    ResidualTrace<T>& r = t.residual[static_cast<std::size_t>(b)];
    FeatureMap<T> h = layers::Conv2dForward<T>(*cur, params[p.conv1.weight], params[p.conv1.bias],
                                               c.kernel, 1, &r.conv1);
    r.act1 = layers::GroupNormForward<T>(h, c.norm_groups, c.norm_eps, params[p.norm1_scale],
                                         params[p.norm1_shift], &r.norm1);
    layers::ReluInPlace(r.act1.data);
    h = layers::Conv2dForward<T>(r.act1, params[p.conv2.weight], params[p.conv2.bias], c.kernel,
                                 1, &r.conv2);
    r.out = layers::GroupNormForward<T>(h, c.norm_groups, c.norm_eps, params[p.norm2_scale],
                                        params[p.norm2_shift], &r.norm2);
    r.out.data += cur->data;
    layers::ReluInPlace(r.out.data);
    cur = &r.out;
  }
  CheckShape(*cur, c.ConvFrames(), c.ConvBins(), c.channels, "residual stack");

  t.pooled = layers::SoftPoolForward<T>(*cur, c.pool_group, params[ids.pool_weight],
                                        params[ids.pool_bias], &t.pool);
  CheckShape(t.pooled, c.PooledFrames(), c.ConvBins(), c.channels, "soft pool");

  const int len = t.pooled.h;
  t.sequence = MapToSequence(t.pooled);
  CheckRows(t.sequence, static_cast<Eigen::Index>(n) * len, c.d_model, "reshape");
  if (c.positional_encoding) {
    for (int b = 0; b < n; ++b) t.sequence.block(static_cast<Eigen::Index>(b) * len, 0, len, c.d_model) += position_;
  }

  Mat<T> stream = t.sequence;
  t.encoder.resize(static_cast<std::size_t>(c.attn_layers));
  for (int m = 0; m < c.attn_layers; ++m) {
    const auto& p = ids.encoder[static_cast<std::size_t>(m)];
    EncoderTrace<T>& e = t.encoder[static_cast<std::size_t>(m)];
    e.input = std::move(stream);
    e.ln1_out = layers::LayerNormForward<T>(e.input, params[p.ln1_gamma], params[p.ln1_beta],
                                            c.ln_eps, &e.ln1);
    e.mid = e.input + layers::AttentionForward<T>(e.ln1_out, n, len, c.heads,
                                                  params[p.qkv_weight], params[p.qkv_bias],
                                                  params[p.out_weight], params[p.out_bias],
                                                  &e.attn);
    e.ln2_out = layers::LayerNormForward<T>(e.mid, params[p.ln2_gamma], params[p.ln2_beta],
                                            c.ln_eps, &e.ln2);
    e.hidden = layers::LinearForward<T>(e.ln2_out, params[p.fc1_weight], params[p.fc1_bias]);
    layers::ReluInPlace(e.hidden);
    stream = e.mid + layers::LinearForward<T>(e.hidden, params[p.fc2_weight], params[p.fc2_bias]);
  }
  t.e_tran = std::move(stream);

  t.e_feat = SelectFrames<T>(t.e_tran, n, len, c.selected_frames);
  t.e_bn = layers::LinearForward<T>(t.e_feat, params[ids.bn_weight], params[ids.bn_bias]);
  layers::ReluInPlace(t.e_bn);
  t.logits = layers::LinearForward<T>(t.e_bn, params[ids.proj_weight], params[ids.proj_bias]);
  CheckRows(t.e_bn, n, c.bottleneck_dim, "bottleneck");
  CheckRows(t.logits, n, c.n_classes, "logits");
  if (mode == Mode::kPretrain) {
    t.recon = layers::LinearForward<T>(t.e_bn, params[ids.recon_weight], params[ids.recon_bias]);
    CheckRows(t.recon, n, c.recon_dim, "reconstruction");
  }
  return t;
}

template <typename T>
void Network<T>::Backward(const ParamStore<T>& params, const Trace<T>& t,
                          const OutputGrads<T>& g, ParamStore<T>* grads) const {
  const ModelConfig& c = config_;
  const ParamIds& ids = params.layout().ids();
  if (g.d_recon.size() > 0 && !t.has_recon())
    throw GraphError("backward: reconstruction gradient given for a trace without reconstruction");

  Mat<T> d_bn = Mat<T>::Zero(t.n, c.bottleneck_dim);
  if (g.d_bn.size() > 0) {
    CheckRows(g.d_bn, t.n, c.bottleneck_dim, "bottleneck gradient");
    d_bn += g.d_bn;
  }
  if (g.d_logits.size() > 0) {
    CheckRows(g.d_logits, t.n, c.n_classes, "logit gradient");
    d_bn += layers::LinearBackward<T>(t.e_bn, g.d_logits, params[ids.proj_weight],
                                      (*grads)[ids.proj_weight], (*grads)[ids.proj_bias]);
  }
  if (g.d_recon.size() > 0) {
    CheckRows(g.d_recon, t.n, c.recon_dim, "reconstruction gradient");
    d_bn += layers::LinearBackward<T>(t.e_bn, g.d_recon, params[ids.recon_weight],
                                      (*grads)[ids.recon_weight], (*grads)[ids.recon_bias]);
  }
  layers::ReluBackwardInPlace(d_bn, t.e_bn);
  const Mat<T> d_feat = layers::LinearBackward<T>(t.e_feat, d_bn, params[ids.bn_weight],
                                                  (*grads)[ids.bn_weight], (*grads)[ids.bn_bias]);

  const int len = t.pooled.h;
  const int d = c.d_model;
  const int r = c.selected_frames;
  Mat<T> d_seq = Mat<T>::Zero(static_cast<Eigen::Index>(t.n) * len, d);
  for (int b = 0; b < t.n; ++b) {
    for (int k = 0; k < r; ++k) {
      d_seq.row(static_cast<Eigen::Index>(b) * len + (len - r + k)) = d_feat.block(b, k * d, 1, d);
    }
  }

  for (int m = c.attn_layers - 1; m >= 0; --m) {
    const auto& p = ids.encoder[static_cast<std::size_t>(m)];
    const EncoderTrace<T>& e = t.encoder[static_cast<std::size_t>(m)];
    Mat<T> d_hidden = layers::LinearBackward<T>(e.hidden, d_seq, params[p.fc2_weight],
                                                (*grads)[p.fc2_weight], (*grads)[p.fc2_bias]);
    layers::ReluBackwardInPlace(d_hidden, e.hidden);
    const Mat<T> d_ln2 = layers::LinearBackward<T>(e.ln2_out, d_hidden, params[p.fc1_weight],
                                                   (*grads)[p.fc1_weight], (*grads)[p.fc1_bias]);
    Mat<T> d_mid = d_seq + layers::LayerNormBackward<T>(e.ln2, d_ln2, params[p.ln2_gamma],
                                                        (*grads)[p.ln2_gamma],
                                                        (*grads)[p.ln2_beta]);
    const Mat<T> d_ln1 = layers::AttentionBackward<T>(
        e.attn, e.ln1_out, d_mid, params[p.qkv_weight], params[p.out_weight],
        (*grads)[p.qkv_weight], (*grads)[p.qkv_bias], (*grads)[p.out_weight],
        (*grads)[p.out_bias]);
    d_seq = d_mid + layers::LayerNormBackward<T>(e.ln1, d_ln1, params[p.ln1_gamma],
                                                 (*grads)[p.ln1_gamma], (*grads)[p.ln1_beta]);
  }

  const FeatureMap<T> d_pooled = SequenceToMap<T>(d_seq, t.n, len, c.ConvBins(), c.channels);
  const FeatureMap<T>& pool_in = c.residual_blocks > 0 ? t.residual.back().out : t.conv_out.back();
  FeatureMap<T> d_map{pool_in.n, pool_in.h, pool_in.w, Mat<T>()};
  d_map.data = layers::SoftPoolBackward<T>(t.pool, pool_in, d_pooled, params[ids.pool_weight],
                                           (*grads)[ids.pool_weight], (*grads)[ids.pool_bias]);

  for (int b = c.residual_blocks - 1; b >= 0; --b) {
    const auto& p = ids.residual[static_cast<std::size_t>(b)];
    const ResidualTrace<T>& rt = t.residual[static_cast<std::size_t>(b)];
    layers::ReluBackwardInPlace(d_map.data, rt.out.data);
    const Mat<T> d_h2 = layers::GroupNormBackward<T>(rt.norm2, d_map, params[p.norm2_scale],
                                                     (*grads)[p.norm2_scale],
                                                     (*grads)[p.norm2_shift]);
    FeatureMap<T> d_act{d_map.n, d_map.h, d_map.w, Mat<T>()};
    d_act.data = layers::Conv2dBackward<T>(rt.conv2, d_h2, params[p.conv2.weight],
                                           (*grads)[p.conv2.weight], (*grads)[p.conv2.bias], true);
    layers::ReluBackwardInPlace(d_act.data, rt.act1.data);
    const Mat<T> d_h1 = layers::GroupNormBackward<T>(rt.norm1, d_act, params[p.norm1_scale],
                                                     (*grads)[p.norm1_scale],
                                                     (*grads)[p.norm1_shift]);
    d_map.data += layers::Conv2dBackward<T>(rt.conv1, d_h1, params[p.conv1.weight],
                                            (*grads)[p.conv1.weight], (*grads)[p.conv1.bias], true);
  }

  Mat<T> d_out = std::move(d_map.data);
  for (int l = c.conv_layers - 1; l >= 0; --l) {
    const auto& p = ids.conv[static_cast<std::size_t>(l)];
    layers::ReluBackwardInPlace(d_out, t.conv_out[static_cast<std::size_t>(l)].data);
    d_out = layers::Conv2dBackward<T>(t.conv[static_cast<std::size_t>(l)], d_out,
                                      params[p.weight], (*grads)[p.weight], (*grads)[p.bias],
                                      l > 0);
  }
}

template <typename T>
std::vector<uint8_t> Network<T>::ActivationSignature(const Trace<T>& t) {
  std::vector<uint8_t> sig;
  for (const auto& m : t.conv_out) AppendMask(m.data, &sig);
  for (const auto& r : t.residual) {
    AppendMask(r.act1.data, &sig);
    AppendMask(r.out.data, &sig);
  }
  for (const auto& e : t.encoder) AppendMask(e.hidden, &sig);
  AppendMask(t.e_bn, &sig);
  return sig;
}

template class Network<float>;
template class Network<double>;
template Mat<float> StackFeatures<float>(std::span<const FbankMatrix>);
template Mat<double> StackFeatures<double>(std::span<const FbankMatrix>);
template Mat<float> MapToSequence<float>(const FeatureMap<float>&);
template Mat<double> MapToSequence<double>(const FeatureMap<double>&);
template FeatureMap<float> SequenceToMap<float>(const Mat<float>&, int, int, int, int);
template FeatureMap<double> SequenceToMap<double>(const Mat<double>&, int, int, int, int);
template Mat<float> SelectFrames<float>(const Mat<float>&, int, int, int);
template Mat<double> SelectFrames<double>(const Mat<double>&, int, int, int);

}  // namespace cabkws
