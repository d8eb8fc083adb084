// core/src/loss/losses.cc

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

#include "cabkws/loss/losses.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "cabkws/common/error.h"

namespace cabkws {

void to_json(nlohmann::json& j, const LossBreakdown& b) {
  j = nlohmann::json{{"l_sim", b.l_sim},     {"l_x", b.l_x},   {"l_x_aug", b.l_x_aug},
                     {"l_z", b.l_z},         {"l_theta", b.l_theta},
                     {"l_dual", b.l_dual},   {"l_ul", b.l_ul}, {"l_ce", b.l_ce}};
}

LossWeights LossWeights::From(const ModelConfig& config) {
  LossWeights w;
  w.sim = config.lambda_sim;
  w.x = config.lambda_x;
  w.x_aug = config.lambda_x_aug;
  w.dual = config.lambda_dual;
  return w;
}

void LossWeights::Validate() const {
  if (sim < 0 || x < 0 || x_aug < 0 || dual < 0)
    throw ConfigError("loss weights must be non-negative");
}

double UnsupervisedLoss(const LossWeights& w, double l_sim, double l_x, double l_x_aug,
                        double l_dual) {
  w.Validate();
  return w.sim * l_sim + w.x * l_x + w.x_aug * l_x_aug + w.dual * l_dual;
}

void ComposeUnsupervised(const LossWeights& w, LossBreakdown* b) {
  b->l_dual = b->l_z + b->l_theta;
  b->l_ul = UnsupervisedLoss(w, b->l_sim, b->l_x, b->l_x_aug, b->l_dual);
}

template <typename T>
double CrossEntropy(const Mat<T>& logits, std::span<const int> labels, Mat<T>* grad) {
  const Eigen::Index n = logits.rows();
  const Eigen::Index s = logits.cols();
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw ShapeError("cross entropy: label count does not match logits");
  if (n == 0) throw DomainError("cross entropy: empty batch");
  if (grad) grad->resize(n, s);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= s)
      throw DomainError("cross entropy: label " + std::to_string(y) + " outside 0.." +
                        std::to_string(s - 1));
    const Eigen::RowVectorXd row = logits.row(i).template cast<double>();
    const double mx = row.maxCoeff();
    const Eigen::RowVectorXd e = (row.array() - mx).exp().matrix();
    const double sum = e.sum();
    total += std::log(sum) + mx - row(y);
    if (grad) {
      Eigen::RowVectorXd g = e / sum;
      g(y) -= 1.0;
      grad->row(i) = (g / static_cast<double>(n)).template cast<T>();
    }
  }
  return total / static_cast<double>(n);
}

double ContrastFromDots(const Mat<double>& dots, std::span<const int> labels, double tau,
                        ContrastMode mode, Mat<double>* d_dots) {
  const Eigen::Index n = dots.rows();
  if (dots.cols() != n || static_cast<Eigen::Index>(labels.size()) != n)
    throw ShapeError("contrast: dot matrix must be N x N with N labels");
  if (n < 2) throw DomainError("contrast: needs at least 2 samples");
  if (!(tau > 0)) throw DomainError("contrast: temperature must be positive");
  const bool within = mode == ContrastMode::kWithinBatch;

  // Per-anchor softmax over candidates and positive counts.
  Mat<double> prob = Mat<double>::Zero(n, n);
  std::vector<int> positives(static_cast<std::size_t>(n), 0);
  std::vector<double> log_denom(static_cast<std::size_t>(n), 0.0);
  int valid = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < n; ++a) {
      if (within && a == i) continue;
      mx = std::max(mx, dots(i, a) / tau);
      if (labels[static_cast<std::size_t>(a)] == labels[static_cast<std::size_t>(i)])
        ++positives[static_cast<std::size_t>(i)];
    }
    double sum = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
      if (within && a == i) continue;
      prob(i, a) = std::exp(dots(i, a) / tau - mx);
      sum += prob(i, a);
    }
    prob.row(i) /= sum;
    log_denom[static_cast<std::size_t>(i)] = mx + std::log(sum);
    if (positives[static_cast<std::size_t>(i)] > 0) ++valid;
  }
  if (valid == 0) throw DomainError("contrast: no anchor has a positive");

  double total = 0.0;
  if (d_dots) d_dots->setZero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int np = positives[static_cast<std::size_t>(i)];
    if (np == 0) continue;
    double anchor = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
      if (within && a == i) continue;
      const bool pos = labels[static_cast<std::size_t>(a)] == labels[static_cast<std::size_t>(i)];
      if (pos) anchor += log_denom[static_cast<std::size_t>(i)] - dots(i, a) / tau;
      if (d_dots) {
        (*d_dots)(i, a) = (prob(i, a) - (pos ? 1.0 / np : 0.0)) / (valid * tau);
      }
    }
    total += anchor / np;
  }
  return total / valid;
}

template <typename T>
double CrossContrast(const Mat<T>& u, const Mat<T>& v, std::span<const int> labels, double tau,
                     ContrastMode mode, Mat<T>* du, Mat<T>* dv) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw ShapeError("contrast: anchor and candidate batches differ in shape");
  const Mat<double> ud = u.template cast<double>();
  const Mat<double> vd = v.template cast<double>();
  const Mat<double> dots = ud * vd.transpose();
  Mat<double> d_dots;
  const bool want = du || dv;
  const double loss = ContrastFromDots(dots, labels, tau, mode, want ? &d_dots : nullptr);
  if (du) *du = (d_dots * vd).template cast<T>();
  if (dv) *dv = (d_dots.transpose() * ud).template cast<T>();
  return loss;
}

template <typename T>
double SelfContrast(const Mat<T>& z, std::span<const int> pair_of, double tau, Mat<T>* dz) {
  const std::size_t n = pair_of.size();
  if (static_cast<Eigen::Index>(n) != z.rows())
    throw ShapeError("self contrast: pairing does not cover the batch");
  if (n < 2) throw DomainError("self contrast: needs at least 2 samples");
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int j = pair_of[i];
    if (j < 0 || static_cast<std::size_t>(j) >= n || static_cast<std::size_t>(j) == i ||
        pair_of[static_cast<std::size_t>(j)] != static_cast<int>(i))
      throw DomainError("self contrast: pairing must be a fixed-point-free involution");
    labels[i] = std::min(static_cast<int>(i), j);
  }
  Mat<T> du, dv;
  const double loss = CrossContrast<T>(z, z, labels, tau, ContrastMode::kWithinBatch,
                                       dz ? &du : nullptr, dz ? &dv : nullptr);
  if (dz) *dz = du + dv;
  return loss;
}

template <typename T>
double SupervisedContrast(const Mat<T>& z, std::span<const int> labels, double tau, Mat<T>* dz) {
  Mat<T> du, dv;
  const double loss = CrossContrast<T>(z, z, labels, tau, ContrastMode::kWithinBatch,
                                       dz ? &du : nullptr, dz ? &dv : nullptr);
  if (dz) *dz = du + dv;
  return loss;
}

template <typename T>
double AnchorContrastZ(const Mat<T>& z, const Mat<T>& theta, std::span<const int> labels,
                       double tau, ContrastMode mode, Mat<T>* dz, Mat<T>* dtheta) {
  return CrossContrast<T>(z, theta, labels, tau, mode, dz, dtheta);
}

template <typename T>
double AnchorContrastTheta(const Mat<T>& z, const Mat<T>& theta, std::span<const int> labels,
                           double tau, ContrastMode mode, Mat<T>* dz, Mat<T>* dtheta) {
  return CrossContrast<T>(theta, z, labels, tau, mode, dtheta, dz);
}

template <typename T>
double MeanSquared(const Mat<T>& a, const Mat<T>& b, Mat<T>* da, Mat<T>* db) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("mean squared: shapes differ (" + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ")");
  if (a.size() == 0) throw DomainError("mean squared: empty input");
  const Mat<double> diff = a.template cast<double>() - b.template cast<double>();
  const double scale = 1.0 / static_cast<double>(a.size());
  if (da) *da = (diff * (2.0 * scale)).template cast<T>();
  if (db) *db = (diff * (-2.0 * scale)).template cast<T>();
  return diff.squaredNorm() * scale;
}

template <typename T>
double SimilarityLoss(const Mat<T>& e_bn, const Mat<T>& e_bn_aug, Mat<T>* d_e, Mat<T>* d_e_aug) {
  return MeanSquared<T>(e_bn, e_bn_aug, d_e, d_e_aug);
}

Mat<double> TimeMean(const Mat<double>& stacked, int frames, std::span<const int> valid_frames) {
  const Eigen::Index n = static_cast<Eigen::Index>(valid_frames.size());
  if (stacked.rows() != n * frames) throw ShapeError("time mean: row count is not n * frames");
  Mat<double> out(n, stacked.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const int valid = valid_frames[static_cast<std::size_t>(i)];
    if (valid < 1) throw DomainError("time mean: sample has no frames");
    if (valid > frames) throw ShapeError("time mean: more valid frames than rows");
    out.row(i) = stacked.block(i * frames, 0, valid, stacked.cols()).colwise().mean();
  }
  return out;
}

template <typename T>
double ReconstructionLoss(const Mat<double>& target_mean, const Mat<T>& recon, Mat<T>* d_recon) {
  const Mat<T> target = target_mean.template cast<T>();
  if (d_recon) {
    const Mat<double> diff = recon.template cast<double>() - target_mean;
    if (diff.size() == 0) throw DomainError("reconstruction: empty input");
    *d_recon = (diff * (2.0 / static_cast<double>(diff.size()))).template cast<T>();
    return diff.squaredNorm() / static_cast<double>(diff.size());
  }
  return MeanSquared<T>(recon, target);
}

template <typename T>
Mat<T> NormalizeRows(const Mat<T>& e) {
  Mat<T> z(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    const T norm = std::max(e.row(i).norm(), static_cast<T>(1e-12));
    z.row(i) = e.row(i) / norm;
  }
  return z;
}

template <typename T>
Mat<T> NormalizeRowsBackward(const Mat<T>& e, const Mat<T>& z, const Mat<T>& dz) {
  Mat<T> de(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    const T norm = e.row(i).norm();
    if (norm < static_cast<T>(1e-12)) {
      de.row(i) = dz.row(i) / static_cast<T>(1e-12);
    } else {
      de.row(i) = (dz.row(i) - z.row(i) * z.row(i).dot(dz.row(i))) / norm;
    }
  }
  return de;
}

#define CABKWS_INSTANTIATE_LOSSES(T)                                                          \
  template double CrossEntropy<T>(const Mat<T>&, std::span<const int>, Mat<T>*);              \
  template double CrossContrast<T>(const Mat<T>&, const Mat<T>&, std::span<const int>, double, \
                                   ContrastMode, Mat<T>*, Mat<T>*);                           \
  template double SelfContrast<T>(const Mat<T>&, std::span<const int>, double, Mat<T>*);      \
  template double SupervisedContrast<T>(const Mat<T>&, std::span<const int>, double, Mat<T>*); \
  template double AnchorContrastZ<T>(const Mat<T>&, const Mat<T>&, std::span<const int>,      \
                                     double, ContrastMode, Mat<T>*, Mat<T>*);                 \
  template double AnchorContrastTheta<T>(const Mat<T>&, const Mat<T>&, std::span<const int>,  \
                                         double, ContrastMode, Mat<T>*, Mat<T>*);             \
  template double MeanSquared<T>(const Mat<T>&, const Mat<T>&, Mat<T>*, Mat<T>*);             \
  template double SimilarityLoss<T>(const Mat<T>&, const Mat<T>&, Mat<T>*, Mat<T>*);          \
  template double ReconstructionLoss<T>(const Mat<double>&, const Mat<T>&, Mat<T>*);          \
  template Mat<T> NormalizeRows<T>(const Mat<T>&);                                            \
  template Mat<T> NormalizeRowsBackward<T>(const Mat<T>&, const Mat<T>&, const Mat<T>&);

CABKWS_INSTANTIATE_LOSSES(float)
CABKWS_INSTANTIATE_LOSSES(double)

}  // namespace cabkws
