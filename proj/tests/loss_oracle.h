// tests/loss_oracle.h

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

#ifndef CABKWS_TESTS_LOSS_ORACLE_H_
#define CABKWS_TESTS_LOSS_ORACLE_H_

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "cabkws/common/random.h"
#include "cabkws/common/tensor.h"

// Reference contrastive losses that materialize every exponential term in a
// double loop. No log-sum-exp, no matrix products.
namespace cabkws::oracle {

inline double Dot(const Mat<double>& a, int i, const Mat<double>& b, int j) {
  double s = 0.0;
  for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(j, k);
  return s;
}

// Anchor u_i against candidates v_a. Within-batch candidates exclude a = i;
// paired-view candidates include it. Positives share the anchor's label.
inline double Contrast(const Mat<double>& u, const Mat<double>& v, std::span<const int> y,
                       double tau, bool paired) {
  const int n = static_cast<int>(u.rows());
  double total = 0.0;
  int anchors = 0;
  for (int i = 0; i < n; ++i) {
    double denom = 0.0;
    for (int a = 0; a < n; ++a) {
      if (!paired && a == i) continue;
      denom += std::exp(Dot(u, i, v, a) / tau);
    }
    double sum = 0.0;
    int positives = 0;
    for (int p = 0; p < n; ++p) {
      if (!paired && p == i) continue;
      if (y[p] != y[i]) continue;
      sum += -std::log(std::exp(Dot(u, i, v, p) / tau) / denom);
      ++positives;
    }
    if (positives == 0) continue;
    total += sum / positives;
    ++anchors;
  }
  if (anchors == 0) throw std::domain_error("no anchor has a positive");
  return total / anchors;
}

// Unsupervised pairwise loss with partner j(i).
inline double Self(const Mat<double>& z, std::span<const int> pair_of, double tau) {
  const int n = static_cast<int>(z.rows());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double denom = 0.0;
    for (int a = 0; a < n; ++a)
      if (a != i) denom += std::exp(Dot(z, i, z, a) / tau);
    total += -std::log(std::exp(Dot(z, i, z, pair_of[i]) / tau) / denom);
  }
  return total / n;
}

inline double Supervised(const Mat<double>& z, std::span<const int> y, double tau) {
  return Contrast(z, z, y, tau, /*paired=*/false);
}

// Representation-anchored and anchor-vector terms.
inline double AnchorZ(const Mat<double>& z, const Mat<double>& theta, std::span<const int> y,
                      double tau, bool paired) {
  return Contrast(z, theta, y, tau, paired);
}
inline double AnchorTheta(const Mat<double>& z, const Mat<double>& theta,
                          std::span<const int> y, double tau, bool paired) {
  return Contrast(theta, z, y, tau, paired);
}

// Random fixed-point-free involution on 0..n-1 (n even).
inline std::vector<int> RandomPairing(int n, Rng& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.Below(i + 1)]);
  std::vector<int> pair(n);
  for (int i = 0; i + 1 < n; i += 2) {
    pair[order[i]] = order[i + 1];
    pair[order[i + 1]] = order[i];
  }
  return pair;
}

// Labels over a few classes with at least one repeated label.
inline std::vector<int> RandomLabels(int n, Rng& rng) {
  const int classes = std::max(1, n / 2);
  std::vector<int> y(n);
  for (int& v : y) v = static_cast<int>(rng.Below(classes));
  if (n >= 2) y[1] = y[0];
  return y;
}

}  // namespace cabkws::oracle

#endif  // CABKWS_TESTS_LOSS_ORACLE_H_
