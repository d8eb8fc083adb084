// core/src/audio/wav_io.cc

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

#include "cabkws/audio/wav_io.h"

#include <algorithm>
#include <cmath>

#include "cabkws/common/binary_io.h"
#include "cabkws/common/error.h"

namespace cabkws {

double MeanPower(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (double s : samples) sum += s * s;
  return sum / static_cast<double>(samples.size());
}

Waveform DecodeWav(std::span<const uint8_t> bytes) {
  binary::Reader r(bytes);
  if (r.remaining() < 12) throw ParseError("WAV: file too short");
  if (r.Bytes(4) != "RIFF") throw ParseError("WAV: missing RIFF tag");
  r.U32();  // riff size, not trusted
  if (r.Bytes(4) != "WAVE") throw ParseError("WAV: missing WAVE tag");

  bool have_fmt = false;
  uint16_t channels = 0, bits = 0;
  uint32_t rate = 0;
  while (r.remaining() >= 8) {
    const std::string id = r.Bytes(4);
    const uint32_t size = r.U32();
    if (id == "fmt ") {
      if (size < 16) throw ParseError("WAV: fmt chunk too small");
      r.Need(size);
      const uint16_t format = r.U16();
      channels = r.U16();
      rate = r.U32();
      r.U32();  // byte rate
      r.U16();  // block align
      bits = r.U16();
      r.Skip(size - 16 + (size & 1));
      // 0xFFFE (extensible) is accepted only when it carries plain PCM bits.
      if (format != 1 && format != 0xFFFE)
        throw UnsupportedFormatError("WAV: only PCM is supported (format " +
                                     std::to_string(format) + ")");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw ParseError("WAV: data chunk before fmt chunk");
      if (channels != 1)
        throw UnsupportedFormatError("WAV: expected mono, got " +
                                     std::to_string(channels) + " channels");
      if (bits != 16)
        throw UnsupportedFormatError("WAV: expected 16-bit PCM, got " +
                                     std::to_string(bits) + "-bit");
      if (rate == 0) throw ParseError("WAV: zero sample rate");
      // Tolerate a data size that overruns the file (streamed writers).
      const std::size_t avail = std::min<std::size_t>(size, r.remaining());
      const std::size_t n = avail / 2;
      if (n == 0) throw ParseError("WAV: no samples");
      Waveform w;
      w.sample_rate = static_cast<int>(rate);
      w.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<int16_t>(r.U16());
        w.samples[i] = static_cast<double>(v) / 32768.0;
      }
      return w;
    } else {
      r.Skip(std::min<std::size_t>(size + (size & 1), r.remaining()));
    }
  }
  throw ParseError(have_fmt ? "WAV: missing data chunk" : "WAV: missing fmt chunk");
}

std::vector<uint8_t> EncodeWav(const Waveform& wave) {
  const auto n = static_cast<uint32_t>(wave.samples.size());
  std::vector<uint8_t> out;
  out.reserve(44 + 2 * n);
  binary::PutBytes(out, "RIFF");
  binary::PutU32(out, 36 + 2 * n);
  binary::PutBytes(out, "WAVE");
  binary::PutBytes(out, "fmt ");
  binary::PutU32(out, 16);
  binary::PutU16(out, 1);
  binary::PutU16(out, 1);
  binary::PutU32(out, static_cast<uint32_t>(wave.sample_rate));
  binary::PutU32(out, static_cast<uint32_t>(wave.sample_rate) * 2);
  binary::PutU16(out, 2);
  binary::PutU16(out, 16);
  binary::PutBytes(out, "data");
  binary::PutU32(out, 2 * n);
  for (double s : wave.samples) {
    const double scaled = std::nearbyint(s * 32768.0);
    const auto v = static_cast<int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    binary::PutU16(out, static_cast<uint16_t>(v));
  }
  return out;
}

Waveform LoadWav(const std::string& path, int target_rate) {
  const std::vector<uint8_t> bytes = binary::ReadFile(path);
  Waveform w;
  try {
    w = DecodeWav(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const UnsupportedFormatError& e) {
    throw UnsupportedFormatError(path + ": " + e.what());
  }
  w.source_id = path;
  if (target_rate > 0 && w.sample_rate != target_rate)
    w = ResampleLinear(w, target_rate);
  return w;
}

void SaveWav(const std::string& path, const Waveform& wave) {
  binary::WriteFileAtomic(path, EncodeWav(wave));
}

Waveform ResampleLinear(const Waveform& wave, int new_rate) {
  if (new_rate <= 0) throw DomainError("resample: rate must be positive");
  if (wave.empty()) throw DomainError("resample: empty waveform");
  if (new_rate == wave.sample_rate) return wave;
  const double step = static_cast<double>(wave.sample_rate) / new_rate;
  const auto n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(wave.size()) / step));
  Waveform out;
  out.sample_rate = new_rate;
  out.source_id = wave.source_id;
  out.samples.resize(std::max<std::size_t>(n_out, 1));
  const std::size_t last = wave.size() - 1;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double pos = static_cast<double>(i) * step;
    const auto k = static_cast<std::size_t>(pos);
    if (k >= last) {
      out.samples[i] = wave.samples[last];
    } else {
      const double frac = pos - static_cast<double>(k);
      out.samples[i] = frac == 0.0 ? wave.samples[k]
                                   : wave.samples[k] + frac * (wave.samples[k + 1] - wave.samples[k]);
    }
  }
  return out;
}

}  // namespace cabkws
