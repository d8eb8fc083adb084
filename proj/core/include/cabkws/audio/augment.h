// core/include/cabkws/audio/augment.h

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

#ifndef CABKWS_AUDIO_AUGMENT_H_
#define CABKWS_AUDIO_AUGMENT_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "cabkws/audio/waveform.h"
#include "cabkws/common/random.h"

namespace cabkws {

// Time-axis rescaling A(lambda * t). Output length is round(N / lambda) and
// output sample n is the linear interpolation of the input at n * lambda.
Waveform SpeedPerturb(const Waveform& wave, double lambda_speed);

// Amplitude scaling lambda * A(t), hard-clipped to [-1, 1].
Waveform VolumePerturb(const Waveform& wave, double lambda_volume);

struct MixResult {
  Waveform mixed;                     // clean + gain * noise, clipped
  std::vector<double> scaled_noise;   // gain * noise window, before clipping
  double gain = 0.0;
  std::size_t offset = 0;             // start of the noise window
};

// Adds a noise window scaled so that the pre-clip SNR over the mixed region
// equals snr_db. The window start is drawn from seed; noise shorter than the
// clean signal is tiled.
MixResult MixNoise(const Waveform& clean, const Waveform& noise, double snr_db,
                   uint64_t seed);

enum class NoiseKind { kWhite, kPink };

// White: i.i.d. Uniform(-0.5, 0.5). Pink: Voss-McCartney over 8 octaves of
// the same white source, peak-normalized to 0.5.
Waveform SynthNoise(NoiseKind kind, std::size_t length, uint64_t seed,
                    int sample_rate = kDefaultSampleRate);

struct AugmentRanges {
  double speed_min = 0.8;
  double speed_max = 1.2;
  double volume_min = 0.5;
  double volume_max = 1.5;
  double snr_min_db = 0.0;
  double snr_max_db = 20.0;
};

struct AugmentSpec {
  double lambda_speed = 1.0;
  double lambda_volume = 1.0;
  std::optional<double> snr_db;
  uint64_t rng_seed = 0;
};

AugmentSpec DrawAugmentSpec(const AugmentRanges& ranges, bool with_noise,
                            Rng& rng);

// Speed, then volume, then (if spec.snr_db is set and noise is given) noise.
Waveform ApplyAugment(const Waveform& wave, const AugmentSpec& spec,
                      const Waveform* noise);

}  // namespace cabkws

#endif  // CABKWS_AUDIO_AUGMENT_H_
