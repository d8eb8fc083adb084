// core/include/cabkws/audio/wav_io.h

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

#ifndef CABKWS_AUDIO_WAV_IO_H_
#define CABKWS_AUDIO_WAV_IO_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cabkws/audio/waveform.h"

namespace cabkws {

// Parses a RIFF/WAVE byte stream holding 16-bit mono PCM. Samples are scaled
// by 1/32768. Throws ParseError on malformed headers and
// UnsupportedFormatError for other encodings or channel counts.
Waveform DecodeWav(std::span<const uint8_t> bytes);

// Encodes as 16-bit mono PCM; amplitudes are scaled by 32768, rounded and
// saturated to the int16 range.
std::vector<uint8_t> EncodeWav(const Waveform& wave);

// Reads a WAV file. When target_rate > 0 and differs from the header rate the
// signal is resampled by linear interpolation.
Waveform LoadWav(const std::string& path, int target_rate = 0);

void SaveWav(const std::string& path, const Waveform& wave);

// Linear-interpolation resampler; output length is round(N * new/old).
Waveform ResampleLinear(const Waveform& wave, int new_rate);

}  // namespace cabkws

#endif  // CABKWS_AUDIO_WAV_IO_H_
