// core/include/cabkws/data/batch.h

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

#ifndef CABKWS_DATA_BATCH_H_
#define CABKWS_DATA_BATCH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "cabkws/audio/augment.h"
#include "cabkws/audio/fbank.h"
#include "cabkws/data/corpus.h"

namespace cabkws {

inline constexpr int kBatchFrames = 98;

struct BatchOptions {
  int num_frames = kBatchFrames;
  AugmentRanges ranges;
  bool add_noise = true;  // corrupt both views with synthetic noise
};

// Minibatch of fixed-size feature matrices. valid_frames[i] counts the
// frames of features[i] that came from audio (the rest is zero padding).
struct Batch {
  std::vector<FbankMatrix> features;
  std::vector<int> valid_frames;
  std::vector<FbankMatrix> aug_features;  // empty outside pretraining
  std::vector<int> aug_valid_frames;
  std::vector<int> labels;  // true labels, or pseudo-labels 0..N-1
  std::vector<std::size_t> entries;  // corpus entry per sample

  int size() const { return static_cast<int>(features.size()); }
  bool has_aug() const { return !aug_features.empty(); }
  // A_i = I \ {i}.
  std::vector<int> ContrastSet(int i) const;
  // P_i = {p in A_i : y_p = y_i}.
  std::vector<int> PositiveSet(int i) const;
};

// Fbank of a waveform fitted to num_frames rows.
FbankMatrix Featurize(const Waveform& wave, const FbankComputer& fbank,
                      int num_frames, int* valid_frames);

// Precomputed clean features for corpus entries.
class FeatureCache {
 public:
  FeatureCache(const Corpus& corpus, std::span<const std::size_t> indices,
               const FbankComputer& fbank, int num_frames = kBatchFrames);

  bool Contains(std::size_t entry) const;
  const FbankMatrix& features(std::size_t entry) const;
  int valid_frames(std::size_t entry) const;

 private:
  std::vector<FbankMatrix> feats_;
  std::vector<int> valid_;
  std::vector<bool> present_;
};

// Draws n distinct entries from pool. For each, X = fbank(noisy clean) and
// X_aug = fbank(noisy(volume(speed(clean)))) with independent draws; the
// pseudo-label of sample i is i. Throws DomainError if n < 2 or the pool is
// smaller than n.
Batch MakePretrainBatch(const Corpus& corpus, std::span<const std::size_t> pool,
                        int n, uint64_t seed, const FbankComputer& fbank,
                        const BatchOptions& options = {});
// Pool = train split, labels ignored.
Batch MakePretrainBatch(const Corpus& corpus, int n, uint64_t seed,
                        const BatchOptions& options = {});

// Draws n distinct entries from pool with their true labels and clean
// features (from cache when given). Throws DomainError on unlabeled draws.
Batch MakeFinetuneBatch(const Corpus& corpus, std::span<const std::size_t> pool,
                        int n, uint64_t seed, const FbankComputer& fbank,
                        const FeatureCache* cache = nullptr,
                        const BatchOptions& options = {});
// Pool = train split.
Batch MakeFinetuneBatch(const Corpus& corpus, int n, uint64_t seed,
                        const BatchOptions& options = {});

// n distinct draws from [0, pool_size) in seeded order.
std::vector<std::size_t> SampleDistinct(std::size_t pool_size, int n, uint64_t seed);

}  // namespace cabkws

#endif  // CABKWS_DATA_BATCH_H_
