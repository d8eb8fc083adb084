// core/include/cabkws/loss/losses.h

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

#ifndef CABKWS_LOSS_LOSSES_H_
#define CABKWS_LOSS_LOSSES_H_

#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cabkws/common/tensor.h"
#include "cabkws/model/config.h"

namespace cabkws {

struct LossBreakdown {
  double l_sim = 0.0;
  double l_x = 0.0;
  double l_x_aug = 0.0;
  double l_z = 0.0;
  double l_theta = 0.0;
  double l_dual = 0.0;
  double l_ul = 0.0;
  double l_ce = 0.0;
};

void to_json(nlohmann::json& j, const LossBreakdown& b);

struct LossWeights {
  double sim = 0.8;
  double x = 0.05;
  double x_aug = 0.05;
  double dual = 0.1;

  static LossWeights From(const ModelConfig& config);
  // Throws ConfigError on a negative weight.
  void Validate() const;
};

// Fills l_dual = l_z + l_theta and the weighted sum l_ul.
void ComposeUnsupervised(const LossWeights& w, LossBreakdown* b);
double UnsupervisedLoss(const LossWeights& w, double l_sim, double l_x, double l_x_aug,
                        double l_dual);

// Mean of -log softmax(logits_i)[y_i]. grad (optional) receives
// (softmax - onehot) / N.
template <typename T>
double CrossEntropy(const Mat<T>& logits, std::span<const int> labels, Mat<T>* grad = nullptr);

// Which candidates an anchor is contrasted against.
//   kWithinBatch: candidates A_i = I \ {i}, positives P_i = {a in A_i : y_a = y_i}.
//   kPairedViews: anchor i of one view against every sample of the other view;
//                 positives are the candidates with y_a = y_i, including i.
enum class ContrastMode { kWithinBatch, kPairedViews };

// Contrastive loss from a matrix of dot products dots(i, a) = u_i . v_a:
//   mean over anchors with P_i nonempty of
//   (1/|P_i|) sum_{p in P_i} -log(exp(dots_ip / tau) / sum_{a in A_i} exp(dots_ia / tau)).
// Throws DomainError if N < 2 or every P_i is empty. d_dots (optional)
// receives the gradient.
double ContrastFromDots(const Mat<double>& dots, std::span<const int> labels, double tau,
                        ContrastMode mode, Mat<double>* d_dots = nullptr);

// Contrast of anchors u against candidates v; gradients are optional.
template <typename T>
double CrossContrast(const Mat<T>& u, const Mat<T>& v, std::span<const int> labels, double tau,
                     ContrastMode mode, Mat<T>* du = nullptr, Mat<T>* dv = nullptr);

// Unsupervised pairwise contrast: pair_of must be a fixed-point-free
// involution on 0..N-1.
template <typename T>
double SelfContrast(const Mat<T>& z, std::span<const int> pair_of, double tau,
                    Mat<T>* dz = nullptr);

// Supervised contrast over true labels.
template <typename T>
double SupervisedContrast(const Mat<T>& z, std::span<const int> labels, double tau,
                          Mat<T>* dz = nullptr);

// Representation-anchored term: anchors z_i against the anchor vectors theta.
template <typename T>
double AnchorContrastZ(const Mat<T>& z, const Mat<T>& theta, std::span<const int> labels,
                       double tau, ContrastMode mode, Mat<T>* dz = nullptr,
                       Mat<T>* dtheta = nullptr);

// Anchor-vector term: anchors theta_i against the representations z.
template <typename T>
double AnchorContrastTheta(const Mat<T>& z, const Mat<T>& theta, std::span<const int> labels,
                           double tau, ContrastMode mode, Mat<T>* dz = nullptr,
                           Mat<T>* dtheta = nullptr);

// Batch-mean of the per-sample mean squared difference. Gradients optional.
template <typename T>
double MeanSquared(const Mat<T>& a, const Mat<T>& b, Mat<T>* da = nullptr, Mat<T>* db = nullptr);

// Bottleneck similarity between the two views.
template <typename T>
double SimilarityLoss(const Mat<T>& e_bn, const Mat<T>& e_bn_aug, Mat<T>* d_e = nullptr,
                      Mat<T>* d_e_aug = nullptr);

// Time-means of stacked (n * frames) x dim features over the first
// valid_frames[i] frames of each sample. Throws DomainError on zero frames.
Mat<double> TimeMean(const Mat<double>& stacked, int frames, std::span<const int> valid_frames);

// Reconstruction of the time-mean feature vector.
template <typename T>
double ReconstructionLoss(const Mat<double>& target_mean, const Mat<T>& recon,
                          Mat<T>* d_recon = nullptr);

// Row-wise L2 normalization, with the norm clamped at 1e-12.
template <typename T>
Mat<T> NormalizeRows(const Mat<T>& e);
// Gradient wrt e given the gradient wrt z = NormalizeRows(e).
template <typename T>
Mat<T> NormalizeRowsBackward(const Mat<T>& e, const Mat<T>& z, const Mat<T>& dz);

}  // namespace cabkws

#endif  // CABKWS_LOSS_LOSSES_H_
