// core/src/data/batch.cc

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

#include "cabkws/data/batch.h"

#include <numeric>

#include "cabkws/common/error.h"
#include "cabkws/common/random.h"

namespace cabkws {
namespace {

Waveform Corrupt(const Waveform& wave, const BatchOptions& options, Rng& rng) {
  const double snr = rng.Uniform(options.ranges.snr_min_db, options.ranges.snr_max_db);
  const NoiseKind kind = rng.Below(2) == 0 ? NoiseKind::kWhite : NoiseKind::kPink;
  const uint64_t noise_seed = rng.NextU64();
  const uint64_t mix_seed = rng.NextU64();
  if (!options.add_noise || MeanPower(wave.samples) == 0.0) return wave;
  const Waveform noise = SynthNoise(kind, wave.size(), noise_seed, wave.sample_rate);
  return MixNoise(wave, noise, snr, mix_seed).mixed;
}

}  // namespace

std::vector<int> Batch::ContrastSet(int i) const {
  std::vector<int> out;
  for (int a = 0; a < size(); ++a)
    if (a != i) out.push_back(a);
  return out;
}

std::vector<int> Batch::PositiveSet(int i) const {
  std::vector<int> out;
  for (int p = 0; p < size(); ++p)
    if (p != i && labels[p] == labels[i]) out.push_back(p);
  return out;
}

FbankMatrix Featurize(const Waveform& wave, const FbankComputer& fbank,
                      int num_frames, int* valid_frames) {
  const FbankMatrix raw = fbank.Compute(wave);
  if (valid_frames) *valid_frames = std::min(raw.NumFrames(), num_frames);
  return FitFrames(raw, num_frames);
}

FeatureCache::FeatureCache(const Corpus& corpus, std::span<const std::size_t> indices,
                           const FbankComputer& fbank, int num_frames)
    : feats_(corpus.audio.size()),
      valid_(corpus.audio.size(), 0),
      present_(corpus.audio.size(), false) {
  for (std::size_t idx : indices) {
    if (idx >= corpus.audio.size()) throw DomainError("feature cache: index out of range");
    if (present_[idx]) continue;
    feats_[idx] = Featurize(corpus.audio[idx], fbank, num_frames, &valid_[idx]);
    present_[idx] = true;
  }
}

bool FeatureCache::Contains(std::size_t entry) const {
  return entry < present_.size() && present_[entry];
}

const FbankMatrix& FeatureCache::features(std::size_t entry) const {
  if (!Contains(entry)) throw DomainError("feature cache: entry not cached");
  return feats_[entry];
}

int FeatureCache::valid_frames(std::size_t entry) const {
  if (!Contains(entry)) throw DomainError("feature cache: entry not cached");
  return valid_[entry];
}

std::vector<std::size_t> SampleDistinct(std::size_t pool_size, int n, uint64_t seed) {
  if (n < 0 || static_cast<std::size_t>(n) > pool_size)
    throw DomainError("batch: pool has " + std::to_string(pool_size) +
                      " entries, cannot draw " + std::to_string(n));
  std::vector<std::size_t> idx(pool_size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const std::size_t j = static_cast<std::size_t>(i) + rng.Below(pool_size - static_cast<std::size_t>(i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(n));
  return idx;
}

Batch MakePretrainBatch(const Corpus& corpus, std::span<const std::size_t> pool,
                        int n, uint64_t seed, const FbankComputer& fbank,
                        const BatchOptions& options) {
  if (n < 2) throw DomainError("pretrain batch: N must be >= 2 for contrastive terms");
  const auto picks = SampleDistinct(pool.size(), n, DeriveSeed(seed, {0}));
  Batch b;
  b.features.resize(n);
  b.valid_frames.resize(n);
  b.aug_features.resize(n);
  b.aug_valid_frames.resize(n);
  b.labels.resize(n);
  b.entries.resize(n);
  for (int i = 0; i < n; ++i) {
    const std::size_t entry = pool[picks[i]];
    const Waveform& clean = corpus.audio.at(entry);
    Rng rng(DeriveSeed(seed, {1, static_cast<uint64_t>(i)}));
    const Waveform view = Corrupt(clean, options, rng);
    const AugmentSpec spec = DrawAugmentSpec(options.ranges, /*with_noise=*/false, rng);
    const Waveform aug = Corrupt(ApplyAugment(clean, spec, nullptr), options, rng);
    b.features[i] = Featurize(view, fbank, options.num_frames, &b.valid_frames[i]);
    b.aug_features[i] = Featurize(aug, fbank, options.num_frames, &b.aug_valid_frames[i]);
    b.labels[i] = i;
    b.entries[i] = entry;
  }
  return b;
}

Batch MakePretrainBatch(const Corpus& corpus, int n, uint64_t seed,
                        const BatchOptions& options) {
  const auto pool = corpus.manifest.Indices(Split::kTrain);
  if (pool.empty()) throw ConfigError("pretrain batch: manifest has no train entries");
  return MakePretrainBatch(corpus, pool, n, seed, FbankComputer(), options);
}

Batch MakeFinetuneBatch(const Corpus& corpus, std::span<const std::size_t> pool,
                        int n, uint64_t seed, const FbankComputer& fbank,
                        const FeatureCache* cache, const BatchOptions& options) {
  if (n < 1) throw DomainError("finetune batch: N must be >= 1");
  const auto picks = SampleDistinct(pool.size(), n, DeriveSeed(seed, {0}));
  Batch b;
  b.features.resize(n);
  b.valid_frames.resize(n);
  b.labels.resize(n);
  b.entries.resize(n);
  for (int i = 0; i < n; ++i) {
    const std::size_t entry = pool[picks[i]];
    const int label = corpus.manifest.entries.at(entry).label;
    if (label == kUnlabeled)
      throw DomainError("finetune batch: drew unlabeled entry " +
                        corpus.manifest.entries[entry].utterance_id);
    if (cache != nullptr && cache->Contains(entry)) {
      b.features[i] = cache->features(entry);
      b.valid_frames[i] = cache->valid_frames(entry);
    } else {
      b.features[i] = Featurize(corpus.audio.at(entry), fbank, options.num_frames,
                                &b.valid_frames[i]);
    }
    b.labels[i] = label;
    b.entries[i] = entry;
  }
  return b;
}

Batch MakeFinetuneBatch(const Corpus& corpus, int n, uint64_t seed,
                        const BatchOptions& options) {
  const auto pool = corpus.manifest.Indices(Split::kTrain);
  return MakeFinetuneBatch(corpus, pool, n, seed, FbankComputer(), nullptr, options);
}

}  // namespace cabkws
