// core/src/train/trainer.cc

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

#include "cabkws/train/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <set>

#include "cabkws/common/error.h"
#include "cabkws/common/float_env.h"
#include "cabkws/common/random.h"
#include "cabkws/train/objective.h"
#include "cabkws/train/optimizer.h"

namespace cabkws {
namespace {

namespace fs = std::filesystem;

AdamConfig AdamFrom(const TrainConfig& t) {
  AdamConfig a;
  a.learning_rate = t.learning_rate;
  a.beta1 = t.beta1;
  a.beta2 = t.beta2;
  a.eps = t.adam_eps;
  return a;
}

FbankComputer FrontEndFor(const ModelConfig& model) {
  FbankComputer fbank;
  if (fbank.config().num_mel_bins != model.input_dim)
    throw ConfigError("model.input_dim (" + std::to_string(model.input_dim) +
                      ") must equal the number of mel bins (" +
                      std::to_string(fbank.config().num_mel_bins) + ")");
  return fbank;
}

MetricsWriter OpenMetrics(const std::string& out_dir, const std::string& name) {
  if (out_dir.empty()) return MetricsWriter();
  fs::create_directories(out_dir);
  return MetricsWriter((fs::path(out_dir) / name).string());
}

class StepTimer {
 public:
  explicit StepTimer(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

void CheckFinite(const LossBreakdown& b, double value, const char* phase, int step) {
  if (!std::isfinite(value) || !std::isfinite(b.l_ul) || !std::isfinite(b.l_ce))
    throw Error(std::string(phase) + ": non-finite loss at step " + std::to_string(step));
}

Checkpoint MakeCheckpoint(const ModelConfig& model, const ParamStore<float>& params,
                          nlohmann::json meta) {
  Checkpoint c;
  c.config = model;
  c.params = params;
  c.meta = std::move(meta);
  return c;
}

// Bottleneck and logits for a list of feature matrices, in chunks.
struct Outputs {
  Mat<double> e_bn;
  Mat<double> logits;
};

Outputs ForwardAll(const Network<float>& net, const ParamStore<float>& params,
                   const std::vector<const FbankMatrix*>& feats, int chunk) {
  const ModelConfig& c = net.config();
  Outputs out;
  const Eigen::Index n = static_cast<Eigen::Index>(feats.size());
  out.e_bn.resize(n, c.bottleneck_dim);
  out.logits.resize(n, c.n_classes);
  for (Eigen::Index s = 0; s < n; s += chunk) {
    const Eigen::Index m = std::min<Eigen::Index>(chunk, n - s);
    Mat<float> x(m * c.input_frames, c.input_dim);
    for (Eigen::Index i = 0; i < m; ++i) {
      const FbankMatrix& f = *feats[static_cast<std::size_t>(s + i)];
      if (f.frames.rows() != c.input_frames || f.frames.cols() != c.input_dim)
        throw ShapeError("evaluate: feature matrix has the wrong shape");
      x.block(i * c.input_frames, 0, c.input_frames, c.input_dim) = f.frames.cast<float>();
    }
    const Trace<float> t = net.Forward(params, x, static_cast<int>(m), Mode::kFinetune);
    out.e_bn.middleRows(s, m) = t.e_bn.cast<double>();
    out.logits.middleRows(s, m) = t.logits.cast<double>();
  }
  return out;
}

}  // namespace

PretrainResult Pretrain(const Corpus& corpus, std::span<const std::size_t> pool,
                        const ModelConfig& model, const TrainConfig& train,
                        const AugmentConfig& augment, const PretrainOptions& options) {
  const ScopedFlushDenormals flush;
  model.Validate();
  train.Validate();
  augment.Validate();
  if (pool.size() < 2) throw ConfigError("pretrain: need at least 2 utterances to pretrain on");
  if (static_cast<std::size_t>(train.batch_size) > pool.size())
    throw ConfigError("pretrain: batch_size " + std::to_string(train.batch_size) +
                      " exceeds the " + std::to_string(pool.size()) + " available utterances");
  if (train.batch_size < 2) throw ConfigError("pretrain: batch_size must be >= 2");

  const FbankComputer fbank = FrontEndFor(model);
  BatchOptions batch_options = augment.Options();
  batch_options.num_frames = model.input_frames;

  const Network<float> net(model);
  ParamStore<float> params = InitParams<float>(model, DeriveSeed(train.seed, {kSeedInit}));
  ParamStore<float> grads(params.layout_ptr());
  Adam adam(AdamFrom(train), params.size());
  MetricsWriter writer = OpenMetrics(options.out_dir, "pretrain_metrics.jsonl");
  const std::set<int> snapshots(options.snapshot_steps.begin(), options.snapshot_steps.end());

  PretrainResult result;
  if (snapshots.count(0)) result.snapshots.emplace(0, params);
  const std::string ckpt_path =
      options.out_dir.empty() ? "" : (fs::path(options.out_dir) / "pretrain.ckpt").string();

  for (int step = 1; step <= train.pretrain_steps; ++step) {
    const StepTimer timer(train.record_time);
    const Batch batch =
        MakePretrainBatch(corpus, pool, train.batch_size,
                          DeriveSeed(train.seed, {kSeedPretrainBatch, static_cast<uint64_t>(step)}),
                          fbank, batch_options);
    const PretrainInputs<float> inputs = MakePretrainInputs<float>(batch);
    grads.SetZero();
    const LossBreakdown loss = PretrainObjective<float>(net, params, inputs, &grads);
    CheckFinite(loss, PretrainValue(loss), "pretrain", step);
    const double norm = ClipGlobalNorm(grads.flat(), train.grad_clip_norm);
    adam.Step(params.flat(), grads.flat());

    StepMetrics m;
    m.step = step;
    m.loss = loss;
    m.grad_norm = norm;
    m.ms = timer.ms();
    writer.Write(m);
    result.metrics.push_back(m);
    if (snapshots.count(step)) result.snapshots.emplace(step, params);
    if (!ckpt_path.empty() && (step % train.eval_every == 0 || step == train.pretrain_steps)) {
      SaveCheckpoint(ckpt_path,
                     MakeCheckpoint(model, params, {{"phase", "pretrain"}, {"step", step}}));
    }
  }
  if (!ckpt_path.empty() && train.pretrain_steps == 0)
    SaveCheckpoint(ckpt_path, MakeCheckpoint(model, params, {{"phase", "pretrain"}, {"step", 0}}));
  result.checkpoint =
      MakeCheckpoint(model, params, {{"phase", "pretrain"}, {"step", train.pretrain_steps}});
  return result;
}

void CheckCompatible(const ModelConfig& checkpoint_config, const ModelConfig& model) {
  ModelConfig a = checkpoint_config;
  a.temperature = model.temperature;
  a.lambda_sim = model.lambda_sim;
  a.lambda_x = model.lambda_x;
  a.lambda_x_aug = model.lambda_x_aug;
  a.lambda_dual = model.lambda_dual;
  if (!(a == model)) {
    nlohmann::json ja = a, jb = model;
    std::string diff;
    for (const auto& [key, value] : jb.items())
      if (ja[key] != value) diff += " " + key;
    throw ConfigError("checkpoint architecture does not match the model config:" + diff);
  }
}

ParamStore<float> FinetuneStart(const ModelConfig& model, uint64_t seed,
                                const ParamStore<float>* init) {
  ParamStore<float> params = InitParams<float>(model, DeriveSeed(seed, {kSeedInit}));
  if (init == nullptr) return params;
  CheckCompatible(init->layout().config(), model);
  const ParamLayout& layout = params.layout();
  const ParamIds& ids = layout.ids();
  for (int id = 0; id < layout.num_tensors(); ++id) {
    if (id == ids.proj_weight || id == ids.proj_bias) continue;
    params[id] = (*init)[id];
  }
  return params;
}

FinetuneResult Finetune(const Corpus& corpus, std::span<const std::size_t> train_pool,
                        std::span<const std::size_t> dev_pool, const ModelConfig& model,
                        const TrainConfig& train, const ParamStore<float>* init,
                        const std::string& out_dir) {
  const ScopedFlushDenormals flush;
  model.Validate();
  train.Validate();
  if (train_pool.empty()) throw ConfigError("finetune: no labeled training entries");
  if (static_cast<std::size_t>(train.batch_size) > train_pool.size())
    throw ConfigError("finetune: batch_size " + std::to_string(train.batch_size) +
                      " exceeds the " + std::to_string(train_pool.size()) +
                      " labeled training entries");
  const FbankComputer fbank = FrontEndFor(model);
  std::vector<std::size_t> cached(train_pool.begin(), train_pool.end());
  cached.insert(cached.end(), dev_pool.begin(), dev_pool.end());
  const FeatureCache cache(corpus, cached, fbank, model.input_frames);
  BatchOptions batch_options;
  batch_options.num_frames = model.input_frames;

  const Network<float> net(model);
  ParamStore<float> params = FinetuneStart(model, train.seed, init);
  ParamStore<float> grads(params.layout_ptr());
  Adam adam(AdamFrom(train), params.size());
  std::vector<uint8_t> trainable;
  if (train.freeze) {
    trainable.assign(params.size(), 0);
    for (const TensorSpec& t : params.layout().tensors()) {
      if (t.name.rfind("bn.", 0) == 0 || t.name.rfind("proj.", 0) == 0)
        std::fill_n(trainable.begin() + static_cast<std::ptrdiff_t>(t.offset), t.size(), 1);
    }
  }
  MetricsWriter writer = OpenMetrics(out_dir, "finetune_metrics.jsonl");

  FinetuneResult result;
  bool have_best = false;
  auto consider = [&](int step) -> double {
    const double acc =
        Evaluate(model, params, corpus, dev_pool, train.eval_batch, &cache).accuracy;
    if (!have_best || acc > result.best_dev_acc) {
      have_best = true;
      result.best_dev_acc = acc;
      result.best_step = step;
      result.best = MakeCheckpoint(
          model, params, {{"phase", "finetune"}, {"step", step}, {"dev_acc", acc}});
    }
    return acc;
  };

  if (train.finetune_steps == 0 && !dev_pool.empty()) consider(0);
  for (int step = 1; step <= train.finetune_steps; ++step) {
    const StepTimer timer(train.record_time);
    const Batch batch = MakeFinetuneBatch(
        corpus, train_pool, train.batch_size,
        DeriveSeed(train.seed, {kSeedFinetuneBatch, static_cast<uint64_t>(step)}), fbank, &cache,
        batch_options);
    const FinetuneInputs<float> inputs = MakeFinetuneInputs<float>(batch);
    grads.SetZero();
    const LossBreakdown loss =
        FinetuneObjective<float>(net, params, inputs, train.finetune_dual, &grads);
    CheckFinite(loss, FinetuneValue(loss), "finetune", step);
    if (!trainable.empty()) {
      for (std::size_t i = 0; i < trainable.size(); ++i)
        if (!trainable[i]) grads.flat()[i] = 0.0f;
    }
    const double norm = ClipGlobalNorm(grads.flat(), train.grad_clip_norm);
    adam.Step(params.flat(), grads.flat(), trainable);

    StepMetrics m;
    m.step = step;
    m.loss = loss;
    m.grad_norm = norm;
    if (!dev_pool.empty() && (step % train.eval_every == 0 || step == train.finetune_steps))
      m.dev_acc = consider(step);
    m.ms = timer.ms();
    writer.Write(m);
    result.metrics.push_back(m);
  }

  nlohmann::json last_meta = {{"phase", "finetune"}, {"step", train.finetune_steps}};
  if (!result.metrics.empty() && result.metrics.back().dev_acc)
    last_meta["dev_acc"] = *result.metrics.back().dev_acc;
  else if (train.finetune_steps == 0 && have_best)
    last_meta["dev_acc"] = result.best_dev_acc;
  result.last = MakeCheckpoint(model, params, last_meta);
  if (!have_best) {
    result.best = result.last;
    result.best_step = train.finetune_steps;
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    SaveCheckpoint((fs::path(out_dir) / "finetune_best.ckpt").string(), result.best);
    SaveCheckpoint((fs::path(out_dir) / "finetune_last.ckpt").string(), result.last);
  }
  return result;
}

EvalResult ScoreLogits(const Mat<double>& logits, std::span<const int> labels, int n_classes) {
  if (labels.empty()) throw DomainError("evaluate: empty split");
  if (logits.rows() != static_cast<Eigen::Index>(labels.size()) || logits.cols() != n_classes)
    throw ShapeError("evaluate: logits do not match labels and class count");
  EvalResult r;
  r.confusion.assign(static_cast<std::size_t>(n_classes),
                     std::vector<int>(static_cast<std::size_t>(n_classes), 0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    if (y < 0 || y >= n_classes) throw DomainError("evaluate: label out of range");
    Eigen::Index pred = 0;
    logits.row(static_cast<Eigen::Index>(i)).maxCoeff(&pred);
    ++r.confusion[static_cast<std::size_t>(y)][static_cast<std::size_t>(pred)];
    if (pred == y) ++r.correct;
  }
  r.total = static_cast<int>(labels.size());
  r.accuracy = static_cast<double>(r.correct) / r.total;
  return r;
}

EvalResult Evaluate(const ModelConfig& model, const ParamStore<float>& params,
                    const Corpus& corpus, std::span<const std::size_t> indices, int chunk,
                    const FeatureCache* cache) {
  const ScopedFlushDenormals flush;
  if (indices.empty()) throw DomainError("evaluate: empty split");
  if (chunk < 1) throw DomainError("evaluate: chunk must be >= 1");
  const FbankComputer fbank = FrontEndFor(model);
  const Network<float> net(model);
  std::vector<FbankMatrix> owned;
  std::vector<const FbankMatrix*> feats;
  std::vector<int> labels;
  owned.reserve(indices.size());
  for (std::size_t idx : indices) {
    const ManifestEntry& e = corpus.manifest.entries.at(idx);
    if (e.label == kUnlabeled)
      throw DomainError("evaluate: entry " + e.utterance_id + " is unlabeled");
    labels.push_back(e.label);
    if (cache != nullptr && cache->Contains(idx)) {
      feats.push_back(&cache->features(idx));
    } else {
      owned.push_back(Featurize(corpus.audio.at(idx), fbank, model.input_frames, nullptr));
      feats.push_back(&owned.back());
    }
  }
  const Outputs out = ForwardAll(net, params, feats, chunk);
  return ScoreLogits(out.logits, labels, model.n_classes);
}

ViewAgreement MeasureViewAgreement(const ModelConfig& model, const ParamStore<float>& params,
                                   const Corpus& corpus, std::span<const std::size_t> indices,
                                   const AugmentConfig& augment, uint64_t seed) {
  const ScopedFlushDenormals flush;
  const FbankComputer fbank = FrontEndFor(model);
  BatchOptions options = augment.Options();
  options.num_frames = model.input_frames;
  const int n = static_cast<int>(indices.size());
  const Batch batch = MakePretrainBatch(corpus, indices, n,
                                        DeriveSeed(seed, {kSeedAgreement}), fbank, options);
  const Network<float> net(model);
  std::vector<const FbankMatrix*> clean, aug;
  for (int i = 0; i < n; ++i) {
    clean.push_back(&batch.features[static_cast<std::size_t>(i)]);
    aug.push_back(&batch.aug_features[static_cast<std::size_t>(i)]);
  }
  const Mat<double> a = NormalizeRows<double>(ForwardAll(net, params, clean, 64).e_bn);
  const Mat<double> b = NormalizeRows<double>(ForwardAll(net, params, aug, 64).e_bn);
  const Mat<double> cos = a * b.transpose();
  ViewAgreement r;
  r.matched = cos.diagonal().mean();
  r.mismatched = (cos.sum() - cos.diagonal().sum()) / (static_cast<double>(n) * (n - 1));
  return r;
}

}  // namespace cabkws
