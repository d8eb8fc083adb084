// core/src/audio/augment.cc

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

#include "cabkws/audio/augment.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "cabkws/common/error.h"

namespace cabkws {
namespace {

void CheckWave(const Waveform& w, const char* what) {
  if (w.sample_rate <= 0)
    throw DomainError(std::string(what) + ": sample rate must be positive");
  if (w.empty()) throw DomainError(std::string(what) + ": empty waveform");
}

}  // namespace

Waveform SpeedPerturb(const Waveform& wave, double lambda_speed) {
  if (!(lambda_speed > 0.0) || !std::isfinite(lambda_speed))
    throw DomainError("speed_perturb: lambda_speed must be > 0");
  CheckWave(wave, "speed_perturb");
  const std::size_t n = wave.size();
  const auto n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) / lambda_speed));
  Waveform out;
  out.sample_rate = wave.sample_rate;
  out.source_id = wave.source_id;
  out.samples.resize(std::max<std::size_t>(n_out, 1));
  const std::size_t last = n - 1;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double pos = static_cast<double>(i) * lambda_speed;
    const auto k = static_cast<std::size_t>(pos);
    if (k >= last) {
      out.samples[i] = wave.samples[last];
      continue;
    }
    const double frac = pos - static_cast<double>(k);
    out.samples[i] = frac == 0.0
                         ? wave.samples[k]
                         : wave.samples[k] + frac * (wave.samples[k + 1] - wave.samples[k]);
  }
  return out;
}

Waveform VolumePerturb(const Waveform& wave, double lambda_volume) {
  if (!(lambda_volume >= 0.0) || !std::isfinite(lambda_volume))
    throw DomainError("volume_perturb: lambda_volume must be >= 0");
  Waveform out = wave;
  for (double& s : out.samples) s = std::clamp(s * lambda_volume, -1.0, 1.0);
  return out;
}

MixResult MixNoise(const Waveform& clean, const Waveform& noise, double snr_db,
                   uint64_t seed) {
  CheckWave(clean, "mix_noise");
  CheckWave(noise, "mix_noise");
  if (clean.sample_rate != noise.sample_rate)
    throw DomainError("mix_noise: sample rates differ");
  if (!std::isfinite(snr_db)) throw DomainError("mix_noise: snr must be finite");
  const double p_clean = MeanPower(clean.samples);
  if (p_clean == 0.0) throw DomainError("mix_noise: clean signal has zero power");

  const std::size_t len = clean.size();
  const std::size_t noise_len = noise.size();
  Rng rng(seed);
  MixResult result;
  std::vector<double> window(len);
  double p_noise = 0.0;
  constexpr int kMaxAttempts = 10;
  int attempt = 0;
  for (; attempt < kMaxAttempts; ++attempt) {
    const std::size_t offset = noise_len >= len ? rng.Below(noise_len - len + 1)
                                                : rng.Below(noise_len);
    for (std::size_t i = 0; i < len; ++i)
      window[i] = noise.samples[(offset + i) % noise_len];
    p_noise = MeanPower(window);
    if (p_noise > 0.0) {
      result.offset = offset;
      break;
    }
  }
  if (attempt == kMaxAttempts)
    throw DomainError("mix_noise: noise window has zero power after 10 attempts");

  result.gain = std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));
  result.scaled_noise.resize(len);
  result.mixed.sample_rate = clean.sample_rate;
  result.mixed.source_id = clean.source_id;
  result.mixed.samples.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    result.scaled_noise[i] = result.gain * window[i];
    result.mixed.samples[i] =
        std::clamp(clean.samples[i] + result.scaled_noise[i], -1.0, 1.0);
  }
  return result;
}

Waveform SynthNoise(NoiseKind kind, std::size_t length, uint64_t seed,
                    int sample_rate) {
  if (length == 0) throw DomainError("synth_noise: length must be >= 1");
  if (sample_rate <= 0) throw DomainError("synth_noise: sample rate must be positive");
  Rng rng(seed);
  Waveform out;
  out.sample_rate = sample_rate;
  out.source_id = kind == NoiseKind::kWhite ? "white" : "pink";
  out.samples.resize(length);
  if (kind == NoiseKind::kWhite) {
    for (double& s : out.samples) s = rng.Uniform() - 0.5;
    return out;
  }

  // Voss-McCartney: row k is redrawn every 2^k samples (on the sample index
  // whose lowest set bit is k); the output sums all rows plus a fresh draw.
  constexpr int kOctaves = 8;
  std::array<double, kOctaves> rows{};
  double running = 0.0;
  for (double& r : rows) {
    r = rng.Uniform() - 0.5;
    running += r;
  }
  double peak = 0.0;
  for (std::size_t n = 0; n < length; ++n) {
    if (n > 0) {
      const int k = std::countr_zero(static_cast<uint64_t>(n));
      if (k < kOctaves) {
        running -= rows[k];
        rows[k] = rng.Uniform() - 0.5;
        running += rows[k];
      }
    }
    out.samples[n] = running + (rng.Uniform() - 0.5);
    peak = std::max(peak, std::abs(out.samples[n]));
  }
  if (peak > 0.0)
    for (double& s : out.samples) s = (s / peak) * 0.5;
  return out;
}

AugmentSpec DrawAugmentSpec(const AugmentRanges& ranges, bool with_noise,
                            Rng& rng) {
  AugmentSpec spec;
  spec.lambda_speed = rng.Uniform(ranges.speed_min, ranges.speed_max);
  spec.lambda_volume = rng.Uniform(ranges.volume_min, ranges.volume_max);
  const double snr = rng.Uniform(ranges.snr_min_db, ranges.snr_max_db);
  if (with_noise) spec.snr_db = snr;
  spec.rng_seed = rng.NextU64();
  return spec;
}

Waveform ApplyAugment(const Waveform& wave, const AugmentSpec& spec,
                      const Waveform* noise) {
  Waveform out = SpeedPerturb(wave, spec.lambda_speed);
  out = VolumePerturb(out, spec.lambda_volume);
  if (spec.snr_db && noise != nullptr)
    out = MixNoise(out, *noise, *spec.snr_db, spec.rng_seed).mixed;
  return out;
}

}  // namespace cabkws
