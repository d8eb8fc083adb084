// core/src/train/grad_check.cc

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

#include "cabkws/train/grad_check.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include <nlohmann/json.hpp>

#include "cabkws/common/error.h"
#include "cabkws/common/random.h"
#include "cabkws/train/objective.h"

namespace cabkws {
namespace {

// Random feature matrices with a few padded frames, and the matching inputs.
struct Problem {
  PretrainInputs<double> pretrain;
  FinetuneInputs<double> finetune;
};

Problem MakeProblem(const ModelConfig& c, int n, uint64_t seed) {
  Rng rng(DeriveSeed(seed, {17}));
  const int frames = c.input_frames;
  Batch batch;
  for (int i = 0; i < n; ++i) {
    for (int view = 0; view < 2; ++view) {
      FbankMatrix f;
      f.frames = Mat<double>::Zero(frames, c.input_dim);
      const int valid = std::max(1, frames - static_cast<int>(rng.Below(4)));
      for (int t = 0; t < valid; ++t)
        for (int u = 0; u < c.input_dim; ++u) f.frames(t, u) = rng.Uniform(-2.0, 2.0);
      (view == 0 ? batch.features : batch.aug_features).push_back(f);
      (view == 0 ? batch.valid_frames : batch.aug_valid_frames).push_back(valid);
    }
    batch.labels.push_back(i % c.n_classes);
  }
  Problem p;
  p.pretrain = MakePretrainInputs<double>(batch);
  p.finetune = MakeFinetuneInputs<double>(batch);
  return p;
}

}  // namespace

const char* GradObjectiveName(GradObjective objective) {
  switch (objective) {
    case GradObjective::kUnsupervised:
      return "l_ul";
    case GradObjective::kCrossEntropy:
      return "ce";
    case GradObjective::kCrossEntropyDual:
      return "ce+dual";
  }
  return "?";
}

void to_json(nlohmann::json& j, const GradCheckReport& r) {
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& t : r.tensors) {
    tensors.push_back({{"name", t.name},
                       {"coords", t.coords},
                       {"max_rel_err", t.max_rel_err},
                       {"max_abs_grad", t.max_abs_grad},
                       {"worst_analytic", t.worst_analytic},
                       {"worst_numeric", t.worst_numeric}});
  }
  j = nlohmann::json{{"objective", r.objective},     {"coords", r.coords},
                     {"kinks_resampled", r.kinks_resampled},
                     {"reduced_step", r.reduced_step},
                     {"max_rel_err", r.max_rel_err}, {"worst_tensor", r.worst_tensor},
                     {"passed", r.passed},           {"tensors", tensors}};
}

GradCheckReport GradCheck(const ModelConfig& config, GradObjective objective,
                          const GradCheckOptions& options) {
  if (options.n_coords < 1) throw DomainError("grad check: n_coords must be >= 1");
  const int n = std::max(options.batch, 2);
  const Network<double> net(config);
  ParamStore<double> params = InitParams<double>(config, DeriveSeed(options.seed, {1}));
  const ParamLayout& layout = params.layout();
  // Non-trivial norm and bias values so those gradients are exercised.
  {
    Rng rng(DeriveSeed(options.seed, {2}));
    for (const TensorSpec& t : layout.tensors()) {
      if (!t.is_vector) continue;
      auto m = params[layout.Find(t.name)];
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] += rng.Uniform(-0.2, 0.2);
    }
  }
  const Problem problem = MakeProblem(config, n, options.seed);

  auto evaluate = [&](const ParamStore<double>& p, ParamStore<double>* grads,
                      std::vector<uint8_t>* signature) -> double {
    Trace<double> trace;
    double value = 0.0;
    if (objective == GradObjective::kUnsupervised) {
      value = PretrainValue(PretrainObjective<double>(net, p, problem.pretrain, grads, &trace));
    } else {
      const bool dual = objective == GradObjective::kCrossEntropyDual;
      value = FinetuneValue(FinetuneObjective<double>(net, p, problem.finetune, dual, grads, &trace));
    }
    if (signature) *signature = Network<double>::ActivationSignature(trace);
    return value;
  };

  ParamStore<double> analytic(params.layout_ptr());
  std::vector<uint8_t> base_signature;
  evaluate(params, &analytic, &base_signature);

  GradCheckReport report;
  report.objective = GradObjectiveName(objective);
  report.tensors.resize(static_cast<std::size_t>(layout.num_tensors()));
  for (int id = 0; id < layout.num_tensors(); ++id)
    report.tensors[static_cast<std::size_t>(id)].name = layout.tensor(id).name;

  Rng rng(DeriveSeed(options.seed, {3}));
  const int total = std::max(options.n_coords, layout.num_tensors());
  std::vector<uint8_t> sig_plus, sig_minus;
  for (int k = 0; k < total; ++k) {
    const int id = k < layout.num_tensors() ? k : static_cast<int>(rng.Below(layout.num_tensors()));
    const TensorSpec& spec = layout.tensor(id);
    // Central difference that must not cross a ReLU kink; the step shrinks
    // by 10x when the full step does.
    auto central = [&](std::size_t at, double h, double* out) {
      const double saved = params.flat()[at];
      params.flat()[at] = saved + h;
      const double up = evaluate(params, nullptr, &sig_plus);
      params.flat()[at] = saved - h;
      const double down = evaluate(params, nullptr, &sig_minus);
      params.flat()[at] = saved;
      if (sig_plus != base_signature || sig_minus != base_signature) return false;
      *out = (up - down) / (2.0 * h);
      return true;
    };
    double num = 0.0;
    std::size_t flat = 0;
    bool found = false;
    for (int attempt = 0; attempt < 20 && !found; ++attempt) {
      flat = spec.offset + rng.Below(spec.size());
      found = central(flat, options.step, &num);
      if (!found) ++report.kinks_resampled;
    }
    for (double h = options.step / 10; !found && h >= options.step * 1e-3; h /= 10) {
      found = central(flat, h, &num);
      if (found) ++report.reduced_step;
    }
    if (!found) throw Error("grad check: could not find a kink-free coordinate in " + spec.name);
    const double ana = analytic.flat()[flat];
    const double denom = std::max({std::abs(ana), std::abs(num), options.floor});
    const double rel = std::abs(ana - num) / denom;
    TensorCheck& tc = report.tensors[static_cast<std::size_t>(id)];
    ++tc.coords;
    if (tc.coords == 1 || rel > tc.max_rel_err) {
      tc.max_rel_err = rel;
      tc.worst_analytic = ana;
      tc.worst_numeric = num;
    }
    tc.max_abs_grad = std::max(tc.max_abs_grad, std::abs(ana));
    ++report.coords;
    if (rel > report.max_rel_err || report.worst_tensor.empty()) {
      if (rel >= report.max_rel_err) report.worst_tensor = spec.name;
      report.max_rel_err = std::max(report.max_rel_err, rel);
    }
  }
  report.passed = report.max_rel_err <= options.tolerance;
  return report;
}

}  // namespace cabkws
