// core/src/data/synth.cc

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

#include "cabkws/data/synth.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "cabkws/audio/augment.h"
#include "cabkws/common/error.h"
#include "cabkws/common/random.h"

namespace cabkws {
namespace {

// End/start frequency ratios. Neighbouring classes differ in sweep direction
// or steepness, so class identity survives a +-20% speed change.
constexpr std::array<double, 12> kRatios = {1.0,  1.6,  0.6, 1.3, 0.77, 1.45,
                                            0.55, 1.15, 0.87, 1.8, 0.68, 1.0};
constexpr int kMaxClasses = 40;
constexpr double kClipSeconds = 1.0;
constexpr double kBurstSeconds = 0.5;
constexpr double kRampSeconds = 0.02;

std::string UtteranceId(Split split, int cls, int k) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "synth_%s_%02d_%04d",
                std::string(SplitName(split)).c_str(), cls, k);
  return buf;
}

}  // namespace

ClassPrototype PrototypeFor(int cls) {
  if (cls < 0 || cls >= kMaxClasses)
    throw DomainError("synth: class index must be in [0, 40)");
  return {300.0 + 100.0 * cls, kRatios[static_cast<std::size_t>(cls) % kRatios.size()]};
}

Waveform SynthUtterance(int cls, uint64_t seed) {
  const ClassPrototype proto = PrototypeFor(cls);
  Rng rng(seed);
  const double f0 = proto.f0_hz * rng.Uniform(0.97, 1.03);
  const double amp = 0.5 * rng.Uniform(0.8, 1.2);
  const double onset = 0.25 + rng.Uniform(-0.1, 0.1);
  const double phase0 = rng.Uniform(0.0, 2.0 * std::numbers::pi);
  const double snr_db = rng.Uniform(0.0, 20.0);
  const uint64_t noise_seed = rng.NextU64();
  const uint64_t mix_seed = rng.NextU64();

  const int rate = kDefaultSampleRate;
  const auto n = static_cast<std::size_t>(kClipSeconds * rate);
  Waveform clean;
  clean.sample_rate = rate;
  clean.samples.assign(n, 0.0);
  const double sweep = f0 * (proto.ratio - 1.0) / kBurstSeconds;  // Hz per second
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate - onset;
    if (t < 0.0 || t >= kBurstSeconds) continue;
    double env = 1.0;
    if (t < kRampSeconds) env = 0.5 - 0.5 * std::cos(std::numbers::pi * t / kRampSeconds);
    const double tail = kBurstSeconds - t;
    if (tail < kRampSeconds) env = 0.5 - 0.5 * std::cos(std::numbers::pi * tail / kRampSeconds);
    const double phase = phase0 + 2.0 * std::numbers::pi * (f0 * t + 0.5 * sweep * t * t);
    clean.samples[i] = amp * env * std::sin(phase);
  }
  const Waveform noise = SynthNoise(NoiseKind::kWhite, n, noise_seed, rate);
  Waveform out = MixNoise(clean, noise, snr_db, mix_seed).mixed;
  return out;
}

Corpus SynthDataset(const SynthSpec& spec) {
  if (spec.n_classes < 1 || spec.n_classes > kMaxClasses)
    throw DomainError("synth: n_classes must be in [1, 40]");
  if (spec.train_per_class < 1 || spec.dev_per_class < 0 || spec.eval_per_class < 0)
    throw DomainError("synth: per-class counts must be >= 1 (train) and >= 0 (dev/eval)");
  Corpus c;
  c.manifest.num_classes = spec.n_classes;
  c.manifest.metadata["generator"] = "synth";
  c.manifest.metadata["seed"] = std::to_string(spec.seed);
  c.manifest.metadata["n_classes"] = std::to_string(spec.n_classes);
  if (spec.n_classes != 12) c.manifest.metadata["nonstandard_class_count"] = "true";

  const std::array<std::pair<Split, int>, 3> splits = {
      std::pair{Split::kTrain, spec.train_per_class},
      std::pair{Split::kDev, spec.dev_per_class},
      std::pair{Split::kEval, spec.eval_per_class}};
  for (const auto& [split, count] : splits) {
    for (int cls = 0; cls < spec.n_classes; ++cls) {
      for (int k = 0; k < count; ++k) {
        ManifestEntry e;
        e.utterance_id = UtteranceId(split, cls, k);
        e.path = "wav/" + e.utterance_id + ".wav";
        e.label = cls;
        e.split = split;
        const uint64_t seed = DeriveSeed(
            spec.seed, {static_cast<uint64_t>(split), static_cast<uint64_t>(cls),
                        static_cast<uint64_t>(k)});
        Waveform w = SynthUtterance(cls, seed);
        w.source_id = e.utterance_id;
        c.manifest.entries.push_back(std::move(e));
        c.audio.push_back(std::move(w));
      }
    }
  }
  return c;
}

}  // namespace cabkws
