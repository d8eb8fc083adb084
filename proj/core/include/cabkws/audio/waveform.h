// core/include/cabkws/audio/waveform.h

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

#ifndef CABKWS_AUDIO_WAVEFORM_H_
#define CABKWS_AUDIO_WAVEFORM_H_

#include <cstddef>
#include <string>
#include <vector>

namespace cabkws {

inline constexpr int kDefaultSampleRate = 16000;

// Mono PCM signal with amplitudes in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;
  std::string source_id;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double Duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Mean squared amplitude; 0 for an empty signal.
double MeanPower(const std::vector<double>& samples);

}  // namespace cabkws

#endif  // CABKWS_AUDIO_WAVEFORM_H_
