// core/include/cabkws/train/objective.h

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

#ifndef CABKWS_TRAIN_OBJECTIVE_H_
#define CABKWS_TRAIN_OBJECTIVE_H_

#include <vector>

#include "cabkws/data/batch.h"
#include "cabkws/loss/losses.h"
#include "cabkws/model/network.h"

namespace cabkws {

// Network input for a pretraining step: 2n stacked matrices, the n clean
// views followed by the n augmented views, plus the time-mean targets of
// the reconstruction head (valid frames only).
template <typename T>
struct PretrainInputs {
  int n = 0;
  Mat<T> x;
  Mat<double> clean_mean;
  Mat<double> aug_mean;
};

template <typename T>
struct FinetuneInputs {
  int n = 0;
  Mat<T> x;
  std::vector<int> labels;
};

template <typename T>
PretrainInputs<T> MakePretrainInputs(const Batch& batch);
template <typename T>
FinetuneInputs<T> MakeFinetuneInputs(const Batch& batch);

// Weighted unsupervised objective l_ul. The clean bottlenecks, normalized,
// are the anchors theta*; the augmented ones give z; sample i's pseudo-label
// is i and the two views are contrasted against each other. Terms whose
// weight is zero are skipped and reported as 0. Adds d l_ul / d params into
// grads when given; trace_out receives the forward trace.
template <typename T>
LossBreakdown PretrainObjective(const Network<T>& net, const ParamStore<T>& params,
                                const PretrainInputs<T>& in, ParamStore<T>* grads,
                                Trace<T>* trace_out = nullptr);

// Cross-entropy, plus lambda_dual * (l_z + l_theta) when dual is set, with
// anchors theta*_i = normalized column y_i of proj.weight. Every sample is
// contrasted against every anchor of the batch, its own included, so a batch
// of distinct labels still has positives. The value optimized is l_ce + l_ul.
template <typename T>
LossBreakdown FinetuneObjective(const Network<T>& net, const ParamStore<T>& params,
                                const FinetuneInputs<T>& in, bool dual, ParamStore<T>* grads,
                                Trace<T>* trace_out = nullptr);

// Scalar that the optimizer minimizes for a breakdown.
inline double PretrainValue(const LossBreakdown& b) { return b.l_ul; }
inline double FinetuneValue(const LossBreakdown& b) { return b.l_ce + b.l_ul; }

}  // namespace cabkws

#endif  // CABKWS_TRAIN_OBJECTIVE_H_
