// core/src/train/objective.cc

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

#include "cabkws/train/objective.h"

#include <numeric>

#include "cabkws/common/error.h"

namespace cabkws {
namespace {

Mat<double> StackDouble(const std::vector<FbankMatrix>& feats) {
  return StackFeatures<double>(std::span<const FbankMatrix>(feats));
}

}  // namespace

template <typename T>
PretrainInputs<T> MakePretrainInputs(const Batch& batch) {
  if (!batch.has_aug()) throw DomainError("pretrain inputs: batch has no augmented view");
  PretrainInputs<T> in;
  in.n = batch.size();
  const Mat<double> clean = StackDouble(batch.features);
  const Mat<double> aug = StackDouble(batch.aug_features);
  const int frames = static_cast<int>(batch.features.front().frames.rows());
  in.x.resize(clean.rows() + aug.rows(), clean.cols());
  in.x.topRows(clean.rows()) = clean.cast<T>();
  in.x.bottomRows(aug.rows()) = aug.cast<T>();
  in.clean_mean = TimeMean(clean, frames, batch.valid_frames);
  in.aug_mean = TimeMean(aug, frames, batch.aug_valid_frames);
  return in;
}

template <typename T>
FinetuneInputs<T> MakeFinetuneInputs(const Batch& batch) {
  FinetuneInputs<T> in;
  in.n = batch.size();
  in.x = StackFeatures<T>(std::span<const FbankMatrix>(batch.features));
  in.labels = batch.labels;
  return in;
}

template <typename T>
LossBreakdown PretrainObjective(const Network<T>& net, const ParamStore<T>& params,
                                const PretrainInputs<T>& in, ParamStore<T>* grads,
                                Trace<T>* trace_out) {
  const ModelConfig& c = net.config();
  const LossWeights w = LossWeights::From(c);
  w.Validate();
  const int n = in.n;
  if (n < 2) throw DomainError("pretrain objective: needs at least 2 samples");
  Trace<T> trace = net.Forward(params, in.x, 2 * n, Mode::kPretrain);
  const Mat<T> e = trace.e_bn.topRows(n);
  const Mat<T> e_aug = trace.e_bn.bottomRows(n);
  const bool backward = grads != nullptr;

  LossBreakdown b;
  OutputGrads<T> og;
  if (backward) og.d_bn = Mat<T>::Zero(2 * n, c.bottleneck_dim);

  if (w.sim > 0) {
    Mat<T> de, de_aug;
    b.l_sim = SimilarityLoss<T>(e, e_aug, backward ? &de : nullptr, backward ? &de_aug : nullptr);
    if (backward) {
      og.d_bn.topRows(n) += static_cast<T>(w.sim) * de;
      og.d_bn.bottomRows(n) += static_cast<T>(w.sim) * de_aug;
    }
  }
  if (w.x > 0 || w.x_aug > 0) {
    if (backward) og.d_recon = Mat<T>::Zero(2 * n, c.recon_dim);
    if (w.x > 0) {
      Mat<T> dr;
      b.l_x = ReconstructionLoss<T>(in.clean_mean, trace.recon.topRows(n), backward ? &dr : nullptr);
      if (backward) og.d_recon.topRows(n) = static_cast<T>(w.x) * dr;
    }
    if (w.x_aug > 0) {
      Mat<T> dr;
      b.l_x_aug = ReconstructionLoss<T>(in.aug_mean, trace.recon.bottomRows(n),
                                        backward ? &dr : nullptr);
      if (backward) og.d_recon.bottomRows(n) = static_cast<T>(w.x_aug) * dr;
    }
  }
  if (w.dual > 0) {
    const Mat<T> theta = NormalizeRows<T>(e);
    const Mat<T> z = NormalizeRows<T>(e_aug);
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::iota(labels.begin(), labels.end(), 0);
    Mat<T> dz1, dt1, dz2, dt2;
    b.l_z = AnchorContrastZ<T>(z, theta, labels, c.temperature, ContrastMode::kPairedViews,
                               backward ? &dz1 : nullptr, backward ? &dt1 : nullptr);
    b.l_theta = AnchorContrastTheta<T>(z, theta, labels, c.temperature,
                                       ContrastMode::kPairedViews, backward ? &dz2 : nullptr,
                                       backward ? &dt2 : nullptr);
    if (backward) {
      og.d_bn.topRows(n) +=
          static_cast<T>(w.dual) * NormalizeRowsBackward<T>(e, theta, dt1 + dt2);
      og.d_bn.bottomRows(n) +=
          static_cast<T>(w.dual) * NormalizeRowsBackward<T>(e_aug, z, dz1 + dz2);
    }
  }
  ComposeUnsupervised(w, &b);
  if (backward) net.Backward(params, trace, og, grads);
  if (trace_out) *trace_out = std::move(trace);
  return b;
}

template <typename T>
LossBreakdown FinetuneObjective(const Network<T>& net, const ParamStore<T>& params,
                                const FinetuneInputs<T>& in, bool dual, ParamStore<T>* grads,
                                Trace<T>* trace_out) {
  const ModelConfig& c = net.config();
  const LossWeights w = LossWeights::From(c);
  w.Validate();
  Trace<T> trace = net.Forward(params, in.x, in.n, Mode::kFinetune);
  const bool backward = grads != nullptr;
  LossBreakdown b;
  OutputGrads<T> og;
  b.l_ce = CrossEntropy<T>(trace.logits, in.labels, backward ? &og.d_logits : nullptr);

  if (dual && w.dual > 0) {
    const ParamIds& ids = params.layout().ids();
    const Mat<T> columns = Mat<T>(params[ids.proj_weight]).transpose();  // S x U_bn
    const Mat<T> anchors = NormalizeRows<T>(columns);
    Mat<T> theta(in.n, c.bottleneck_dim);
    for (int i = 0; i < in.n; ++i) theta.row(i) = anchors.row(in.labels[static_cast<std::size_t>(i)]);
    const Mat<T> z = NormalizeRows<T>(trace.e_bn);
    Mat<T> dz1, dt1, dz2, dt2;
    b.l_z = AnchorContrastZ<T>(z, theta, in.labels, c.temperature, ContrastMode::kPairedViews,
                               backward ? &dz1 : nullptr, backward ? &dt1 : nullptr);
    b.l_theta = AnchorContrastTheta<T>(z, theta, in.labels, c.temperature,
                                       ContrastMode::kPairedViews, backward ? &dz2 : nullptr,
                                       backward ? &dt2 : nullptr);
    if (backward) {
      og.d_bn = static_cast<T>(w.dual) * NormalizeRowsBackward<T>(trace.e_bn, z, dz1 + dz2);
      Mat<T> d_anchors = Mat<T>::Zero(anchors.rows(), anchors.cols());
      for (int i = 0; i < in.n; ++i)
        d_anchors.row(in.labels[static_cast<std::size_t>(i)]) += dt1.row(i) + dt2.row(i);
      const Mat<T> d_columns = NormalizeRowsBackward<T>(columns, anchors, d_anchors);
      (*grads)[ids.proj_weight] += static_cast<T>(w.dual) * d_columns.transpose();
    }
  }
  ComposeUnsupervised(w, &b);
  if (backward) net.Backward(params, trace, og, grads);
  if (trace_out) *trace_out = std::move(trace);
  return b;
}

#define CABKWS_INSTANTIATE_OBJECTIVE(T)                                                      \
  template PretrainInputs<T> MakePretrainInputs<T>(const Batch&);                            \
  template FinetuneInputs<T> MakeFinetuneInputs<T>(const Batch&);                            \
  template LossBreakdown PretrainObjective<T>(const Network<T>&, const ParamStore<T>&,       \
                                              const PretrainInputs<T>&, ParamStore<T>*,      \
                                              Trace<T>*);                                    \
  template LossBreakdown FinetuneObjective<T>(const Network<T>&, const ParamStore<T>&,       \
                                              const FinetuneInputs<T>&, bool, ParamStore<T>*, \
                                              Trace<T>*);

CABKWS_INSTANTIATE_OBJECTIVE(float)
CABKWS_INSTANTIATE_OBJECTIVE(double)

}  // namespace cabkws
