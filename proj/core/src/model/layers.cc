// core/src/model/layers.cc

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

#include "cabkws/model/layers.h"

#include <cmath>
#include <cstring>

#include "cabkws/common/error.h"

namespace cabkws::layers {

ConvGeometry ConvGeometry::Make(int in_h, int in_w, int kernel, int stride) {
  ConvGeometry g;
  g.in_h = in_h;
  g.in_w = in_w;
  g.kernel = kernel;
  g.stride = stride;
  g.out_h = (in_h + stride - 1) / stride;
  g.out_w = (in_w + stride - 1) / stride;
  g.pad_top = std::max((g.out_h - 1) * stride + kernel - in_h, 0) / 2;
  g.pad_left = std::max((g.out_w - 1) * stride + kernel - in_w, 0) / 2;
  return g;
}

template <typename T>
FeatureMap<T> Conv2dForward(const FeatureMap<T>& x, ConstMatMap<T> weight,
                            ConstMatMap<T> bias, int kernel, int stride,
                            ConvCache<T>* cache) {
  const int cin = x.channels();
  if (weight.rows() != kernel * kernel * cin)
    throw ShapeError("conv2d: weight rows " + std::to_string(weight.rows()) +
                     " do not match k*k*cin = " + std::to_string(kernel * kernel * cin));
  const ConvGeometry geo = ConvGeometry::Make(x.h, x.w, kernel, stride);
  ConvCache<T> local;
  ConvCache<T>& c = cache ? *cache : local;
  c.geo = geo;
  c.n = x.n;
  c.cin = cin;
  const Eigen::Index rows = static_cast<Eigen::Index>(x.n) * geo.out_h * geo.out_w;
  c.col.setZero(rows, static_cast<Eigen::Index>(kernel) * kernel * cin);
  for (int b = 0; b < x.n; ++b) {
    for (int i = 0; i < geo.out_h; ++i) {
      for (int j = 0; j < geo.out_w; ++j) {
        const Eigen::Index r = (static_cast<Eigen::Index>(b) * geo.out_h + i) * geo.out_w + j;
        T* dst = c.col.row(r).data();
        for (int ky = 0; ky < kernel; ++ky) {
          const int hi = i * stride + ky - geo.pad_top;
          if (hi < 0 || hi >= x.h) continue;
          for (int kx = 0; kx < kernel; ++kx) {
            const int wi = j * stride + kx - geo.pad_left;
            if (wi < 0 || wi >= x.w) continue;
            const Eigen::Index src = (static_cast<Eigen::Index>(b) * x.h + hi) * x.w + wi;
            std::memcpy(dst + (ky * kernel + kx) * cin, x.data.row(src).data(),
                        sizeof(T) * static_cast<std::size_t>(cin));
          }
        }
      }
    }
  }
  FeatureMap<T> out;
  out.n = x.n;
  out.h = geo.out_h;
  out.w = geo.out_w;
  out.data.noalias() = c.col * weight;
  out.data.rowwise() += bias.row(0);
  return out;
}

template <typename T>
Mat<T> Conv2dBackward(const ConvCache<T>& c, const Mat<T>& dout, ConstMatMap<T> weight,
                      MatMap<T> dweight, MatMap<T> dbias, bool want_dx) {
  dweight.noalias() += c.col.transpose() * dout;
  dbias.row(0) += dout.colwise().sum();
  if (!want_dx) return {};
  const ConvGeometry& geo = c.geo;
  const int k = geo.kernel;
  const Mat<T> dcol = dout * weight.transpose();
  Mat<T> dx = Mat<T>::Zero(static_cast<Eigen::Index>(c.n) * geo.in_h * geo.in_w, c.cin);
  for (int b = 0; b < c.n; ++b) {
    for (int i = 0; i < geo.out_h; ++i) {
      for (int j = 0; j < geo.out_w; ++j) {
        const Eigen::Index r = (static_cast<Eigen::Index>(b) * geo.out_h + i) * geo.out_w + j;
        for (int ky = 0; ky < k; ++ky) {
          const int hi = i * geo.stride + ky - geo.pad_top;
          if (hi < 0 || hi >= geo.in_h) continue;
          for (int kx = 0; kx < k; ++kx) {
            const int wi = j * geo.stride + kx - geo.pad_left;
            if (wi < 0 || wi >= geo.in_w) continue;
            const Eigen::Index dst = (static_cast<Eigen::Index>(b) * geo.in_h + hi) * geo.in_w + wi;
            dx.row(dst) += dcol.row(r).segment((ky * k + kx) * c.cin, c.cin);
          }
        }
      }
    }
  }
  return dx;
}

template <typename T>
void ReluInPlace(Mat<T>& x) {
  x = x.cwiseMax(T(0));
}

template <typename T>
void ReluBackwardInPlace(Mat<T>& grad, const Mat<T>& out) {
  grad = (out.array() > T(0)).select(grad, T(0));
}

template <typename T>
FeatureMap<T> GroupNormForward(const FeatureMap<T>& x, int groups, double eps,
                               ConstMatMap<T> scale, ConstMatMap<T> shift,
                               GroupNormCache<T>* cache) {
  const int channels = x.channels();
  if (groups < 1 || channels % groups != 0)
    throw ConfigError("group norm: channels not divisible by groups");
  const int cpg = channels / groups;
  const Eigen::Index positions = static_cast<Eigen::Index>(x.h) * x.w;
  GroupNormCache<T> local;
  GroupNormCache<T>& c = cache ? *cache : local;
  c.groups = groups;
  c.xhat.resize(x.data.rows(), channels);
  c.inv_std.assign(static_cast<std::size_t>(x.n) * groups, T(0));
  for (int b = 0; b < x.n; ++b) {
    for (int g = 0; g < groups; ++g) {
      const auto block = x.data.block(b * positions, g * cpg, positions, cpg);
      const T mean = block.mean();
      const T var = (block.array() - mean).square().mean();
      const T inv = T(1) / std::sqrt(var + static_cast<T>(eps));
      c.inv_std[static_cast<std::size_t>(b) * groups + g] = inv;
      c.xhat.block(b * positions, g * cpg, positions, cpg) = (block.array() - mean) * inv;
    }
  }
  FeatureMap<T> out{x.n, x.h, x.w, Mat<T>()};
  out.data = (c.xhat.array().rowwise() * scale.row(0).array()).rowwise() + shift.row(0).array();
  return out;
}

template <typename T>
Mat<T> GroupNormBackward(const GroupNormCache<T>& c, const FeatureMap<T>& dout,
                         ConstMatMap<T> scale, MatMap<T> dscale, MatMap<T> dshift) {
  const int channels = dout.channels();
  const int cpg = channels / c.groups;
  const Eigen::Index positions = static_cast<Eigen::Index>(dout.h) * dout.w;
  dscale.row(0) += (dout.data.array() * c.xhat.array()).matrix().colwise().sum();
  dshift.row(0) += dout.data.colwise().sum();
  const Mat<T> dxhat = (dout.data.array().rowwise() * scale.row(0).array()).matrix();
  Mat<T> dx(dout.data.rows(), channels);
  const T m = static_cast<T>(positions * cpg);
  for (int b = 0; b < dout.n; ++b) {
    for (int g = 0; g < c.groups; ++g) {
      const auto dh = dxhat.block(b * positions, g * cpg, positions, cpg);
      const auto xh = c.xhat.block(b * positions, g * cpg, positions, cpg);
      const T sum_d = dh.sum();
      const T sum_dx = (dh.array() * xh.array()).sum();
      const T inv = c.inv_std[static_cast<std::size_t>(b) * c.groups + g];
      dx.block(b * positions, g * cpg, positions, cpg) =
          (inv / m) * (m * dh.array() - sum_d - xh.array() * sum_dx);
    }
  }
  return dx;
}

template <typename T>
FeatureMap<T> SoftPoolForward(const FeatureMap<T>& x, int group, ConstMatMap<T> weight,
                              ConstMatMap<T> bias, SoftPoolCache<T>* cache) {
  if (group < 1) throw DomainError("soft pool: group must be >= 1");
  const int channels = x.channels();
  if (weight.rows() != channels || weight.cols() != x.w)
    throw ShapeError("soft pool: scorer shape must be channels x bins");
  const int out_h = (x.h + group - 1) / group;
  SoftPoolCache<T> local;
  SoftPoolCache<T>& c = cache ? *cache : local;
  c.group = group;
  c.beta.resize(static_cast<Eigen::Index>(x.n) * x.h, channels);
  const Mat<T> wt = weight.transpose();  // bins x channels

  // Scores alpha, one row per (sample, frame).
  Mat<T> alpha(c.beta.rows(), channels);
  for (int b = 0; b < x.n; ++b) {
    for (int t = 0; t < x.h; ++t) {
      RowVec<T> a = bias.row(0);
      for (int f = 0; f < x.w; ++f)
        a += x.data.row((static_cast<Eigen::Index>(b) * x.h + t) * x.w + f).cwiseProduct(wt.row(f));
      alpha.row(static_cast<Eigen::Index>(b) * x.h + t) = a;
    }
  }

  FeatureMap<T> out = FeatureMap<T>::Zeros(x.n, out_h, x.w, channels);
  for (int b = 0; b < x.n; ++b) {
    for (int p = 0; p < out_h; ++p) {
      const int q0 = p * group;
      const int q1 = std::min(q0 + group, x.h);
      if (q1 <= q0) throw Error("soft pool: empty group");
      const Eigen::Index base = static_cast<Eigen::Index>(b) * x.h;
      RowVec<T> mx = alpha.row(base + q0);
      for (int q = q0 + 1; q < q1; ++q) mx = mx.cwiseMax(alpha.row(base + q));
      RowVec<T> sum = RowVec<T>::Zero(channels);
      for (int q = q0; q < q1; ++q) {
        c.beta.row(base + q) = (alpha.row(base + q) - mx).array().exp().matrix();
        sum += c.beta.row(base + q);
      }
      for (int q = q0; q < q1; ++q) {
        c.beta.row(base + q).array() /= sum.array();
        for (int f = 0; f < x.w; ++f) {
          out.data.row((static_cast<Eigen::Index>(b) * out_h + p) * x.w + f) +=
              c.beta.row(base + q).cwiseProduct(x.data.row((base + q) * x.w + f));
        }
      }
    }
  }
  return out;
}

template <typename T>
Mat<T> SoftPoolBackward(const SoftPoolCache<T>& c, const FeatureMap<T>& x,
                        const FeatureMap<T>& dout, ConstMatMap<T> weight,
                        MatMap<T> dweight, MatMap<T> dbias) {
  const int channels = x.channels();
  const int group = c.group;
  const Mat<T> wt = weight.transpose();
  Mat<T> dwt = Mat<T>::Zero(x.w, channels);
  Mat<T> dx = Mat<T>::Zero(x.data.rows(), channels);
  std::vector<RowVec<T>> dbeta(static_cast<std::size_t>(group));
  for (int b = 0; b < x.n; ++b) {
    for (int p = 0; p < dout.h; ++p) {
      const int q0 = p * group;
      const int q1 = std::min(q0 + group, x.h);
      const Eigen::Index base = static_cast<Eigen::Index>(b) * x.h;
      RowVec<T> weighted = RowVec<T>::Zero(channels);  // sum_q beta_q dbeta_q
      for (int q = q0; q < q1; ++q) {
        RowVec<T>& db = dbeta[static_cast<std::size_t>(q - q0)];
        db = RowVec<T>::Zero(channels);
        for (int f = 0; f < x.w; ++f) {
          const auto g = dout.data.row((static_cast<Eigen::Index>(b) * dout.h + p) * x.w + f);
          const Eigen::Index xr = (base + q) * x.w + f;
          db += g.cwiseProduct(x.data.row(xr));
          dx.row(xr) += c.beta.row(base + q).cwiseProduct(g);
        }
        weighted += c.beta.row(base + q).cwiseProduct(db);
      }
      for (int q = q0; q < q1; ++q) {
        const RowVec<T> dalpha =
            c.beta.row(base + q).cwiseProduct(dbeta[static_cast<std::size_t>(q - q0)] - weighted);
        dbias.row(0) += dalpha;
        for (int f = 0; f < x.w; ++f) {
          const Eigen::Index xr = (base + q) * x.w + f;
          dwt.row(f) += dalpha.cwiseProduct(x.data.row(xr));
          dx.row(xr) += dalpha.cwiseProduct(wt.row(f));
        }
      }
    }
  }
  dweight += dwt.transpose();
  return dx;
}

template <typename T>
Mat<T> LayerNormForward(const Mat<T>& x, ConstMatMap<T> gamma, ConstMatMap<T> beta,
                        double eps, LayerNormCache<T>* cache) {
  LayerNormCache<T> local;
  LayerNormCache<T>& c = cache ? *cache : local;
  const Eigen::Index d = x.cols();
  c.xhat.resize(x.rows(), d);
  c.inv_std.resize(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const T mean = x.row(r).mean();
    const T var = (x.row(r).array() - mean).square().mean();
    const T inv = T(1) / std::sqrt(var + static_cast<T>(eps));
    c.inv_std[r] = inv;
    c.xhat.row(r) = (x.row(r).array() - mean) * inv;
  }
  return ((c.xhat.array().rowwise() * gamma.row(0).array()).rowwise() + beta.row(0).array())
      .matrix();
}

template <typename T>
Mat<T> LayerNormBackward(const LayerNormCache<T>& c, const Mat<T>& dout,
                         ConstMatMap<T> gamma, MatMap<T> dgamma, MatMap<T> dbeta) {
  dgamma.row(0) += (dout.array() * c.xhat.array()).matrix().colwise().sum();
  dbeta.row(0) += dout.colwise().sum();
  const Mat<T> dxhat = (dout.array().rowwise() * gamma.row(0).array()).matrix();
  const T d = static_cast<T>(dout.cols());
  Mat<T> dx(dout.rows(), dout.cols());
  for (Eigen::Index r = 0; r < dout.rows(); ++r) {
    const T sum_d = dxhat.row(r).sum();
    const T sum_dx = dxhat.row(r).dot(c.xhat.row(r));
    dx.row(r) = (c.inv_std[r] / d) *
                (d * dxhat.row(r).array() - sum_d - c.xhat.row(r).array() * sum_dx);
  }
  return dx;
}

template <typename T>
Mat<T> LinearForward(const Mat<T>& x, ConstMatMap<T> weight, ConstMatMap<T> bias) {
  if (x.cols() != weight.rows())
    throw ShapeError("linear: input width " + std::to_string(x.cols()) +
                     " does not match weight rows " + std::to_string(weight.rows()));
  Mat<T> y = x * weight;
  y.rowwise() += bias.row(0);
  return y;
}

template <typename T>
Mat<T> LinearBackward(const Mat<T>& x, const Mat<T>& dout, ConstMatMap<T> weight,
                      MatMap<T> dweight, MatMap<T> dbias, bool want_dx) {
  dweight.noalias() += x.transpose() * dout;
  dbias.row(0) += dout.colwise().sum();
  if (!want_dx) return {};
  return dout * weight.transpose();
}

template <typename T>
Mat<T> AttentionForward(const Mat<T>& x, int n, int len, int heads,
                        ConstMatMap<T> qkv_weight, ConstMatMap<T> qkv_bias,
                        ConstMatMap<T> out_weight, ConstMatMap<T> out_bias,
                        AttentionCache<T>* cache) {
  const int d = static_cast<int>(x.cols());
  if (d % heads != 0) throw ConfigError("attention: d_model not divisible by heads");
  if (x.rows() != static_cast<Eigen::Index>(n) * len)
    throw ShapeError("attention: input rows must be n * len");
  const int dh = d / heads;
  const T scale = T(1) / std::sqrt(static_cast<T>(dh));
  AttentionCache<T> local;
  AttentionCache<T>& c = cache ? *cache : local;
  c.n = n;
  c.len = len;
  c.heads = heads;
  c.qkv = LinearForward<T>(x, qkv_weight, qkv_bias);
  c.probs.resize(static_cast<Eigen::Index>(n) * heads * len, len);
  c.context.resize(x.rows(), d);
  for (int b = 0; b < n; ++b) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(b) * len;
    for (int h = 0; h < heads; ++h) {
      const auto q = c.qkv.block(r0, h * dh, len, dh);
      const auto k = c.qkv.block(r0, d + h * dh, len, dh);
      const auto v = c.qkv.block(r0, 2 * d + h * dh, len, dh);
      Mat<T> s = (q * k.transpose()) * scale;
      for (int i = 0; i < len; ++i) {
        const T mx = s.row(i).maxCoeff();
        s.row(i) = (s.row(i).array() - mx).exp().matrix();
        s.row(i) /= s.row(i).sum();
      }
      c.probs.block((static_cast<Eigen::Index>(b) * heads + h) * len, 0, len, len) = s;
      c.context.block(r0, h * dh, len, dh).noalias() = s * v;
    }
  }
  return LinearForward<T>(c.context, out_weight, out_bias);
}

template <typename T>
Mat<T> AttentionBackward(const AttentionCache<T>& c, const Mat<T>& x, const Mat<T>& dout,
                         ConstMatMap<T> qkv_weight, ConstMatMap<T> out_weight,
                         MatMap<T> dqkv_weight, MatMap<T> dqkv_bias,
                         MatMap<T> dout_weight, MatMap<T> dout_bias) {
  const int d = static_cast<int>(x.cols());
  const int dh = d / c.heads;
  const int len = c.len;
  const T scale = T(1) / std::sqrt(static_cast<T>(dh));
  const Mat<T> dcontext = LinearBackward<T>(c.context, dout, out_weight, dout_weight, dout_bias);
  Mat<T> dqkv(c.qkv.rows(), c.qkv.cols());
  for (int b = 0; b < c.n; ++b) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(b) * len;
    for (int h = 0; h < c.heads; ++h) {
      const auto q = c.qkv.block(r0, h * dh, len, dh);
      const auto k = c.qkv.block(r0, d + h * dh, len, dh);
      const auto v = c.qkv.block(r0, 2 * d + h * dh, len, dh);
      const auto a = c.probs.block((static_cast<Eigen::Index>(b) * c.heads + h) * len, 0, len, len);
      const auto dc = dcontext.block(r0, h * dh, len, dh);
      const Mat<T> da = dc * v.transpose();
      dqkv.block(r0, 2 * d + h * dh, len, dh).noalias() = a.transpose() * dc;
      const Vec<T> row_dot = (da.array() * a.array()).rowwise().sum();
      const Mat<T> ds = (a.array() * (da.colwise() - row_dot).array()).matrix() * scale;
      dqkv.block(r0, h * dh, len, dh).noalias() = ds * k;
      dqkv.block(r0, d + h * dh, len, dh).noalias() = ds.transpose() * q;
    }
  }
  return LinearBackward<T>(x, dqkv, qkv_weight, dqkv_weight, dqkv_bias);
}

template <typename T>
Mat<T> PositionalEncoding(int len, int d) {
  Mat<T> pe(len, d);
  for (int p = 0; p < len; ++p) {
    for (int i = 0; i < d; i += 2) {
      const double angle = p / std::pow(10000.0, static_cast<double>(i) / d);
      pe(p, i) = static_cast<T>(std::sin(angle));
      if (i + 1 < d) pe(p, i + 1) = static_cast<T>(std::cos(angle));
    }
  }
  return pe;
}

#define CABKWS_INSTANTIATE_LAYERS(T)                                                        \
  template FeatureMap<T> Conv2dForward<T>(const FeatureMap<T>&, ConstMatMap<T>,              \
                                          ConstMatMap<T>, int, int, ConvCache<T>*);          \
  template Mat<T> Conv2dBackward<T>(const ConvCache<T>&, const Mat<T>&, ConstMatMap<T>,      \
                                    MatMap<T>, MatMap<T>, bool);                             \
  template void ReluInPlace<T>(Mat<T>&);                                                     \
  template void ReluBackwardInPlace<T>(Mat<T>&, const Mat<T>&);                              \
  template FeatureMap<T> GroupNormForward<T>(const FeatureMap<T>&, int, double,              \
                                             ConstMatMap<T>, ConstMatMap<T>,                 \
                                             GroupNormCache<T>*);                            \
  template Mat<T> GroupNormBackward<T>(const GroupNormCache<T>&, const FeatureMap<T>&,       \
                                       ConstMatMap<T>, MatMap<T>, MatMap<T>);                \
  template FeatureMap<T> SoftPoolForward<T>(const FeatureMap<T>&, int, ConstMatMap<T>,       \
                                            ConstMatMap<T>, SoftPoolCache<T>*);              \
  template Mat<T> SoftPoolBackward<T>(const SoftPoolCache<T>&, const FeatureMap<T>&,         \
                                      const FeatureMap<T>&, ConstMatMap<T>, MatMap<T>,       \
                                      MatMap<T>);                                            \
  template Mat<T> LayerNormForward<T>(const Mat<T>&, ConstMatMap<T>, ConstMatMap<T>, double, \
                                      LayerNormCache<T>*);                                   \
  template Mat<T> LayerNormBackward<T>(const LayerNormCache<T>&, const Mat<T>&,              \
                                       ConstMatMap<T>, MatMap<T>, MatMap<T>);                \
  template Mat<T> LinearForward<T>(const Mat<T>&, ConstMatMap<T>, ConstMatMap<T>);           \
  template Mat<T> LinearBackward<T>(const Mat<T>&, const Mat<T>&, ConstMatMap<T>, MatMap<T>, \
                                    MatMap<T>, bool);                                        \
  template Mat<T> AttentionForward<T>(const Mat<T>&, int, int, int, ConstMatMap<T>,          \
                                      ConstMatMap<T>, ConstMatMap<T>, ConstMatMap<T>,        \
                                      AttentionCache<T>*);                                   \
  template Mat<T> AttentionBackward<T>(const AttentionCache<T>&, const Mat<T>&,              \
                                       const Mat<T>&, ConstMatMap<T>, ConstMatMap<T>,        \
                                       MatMap<T>, MatMap<T>, MatMap<T>, MatMap<T>);          \
  template Mat<T> PositionalEncoding<T>(int, int);

CABKWS_INSTANTIATE_LAYERS(float)
CABKWS_INSTANTIATE_LAYERS(double)

}  // namespace cabkws::layers
