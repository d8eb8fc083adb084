// core/src/audio/fbank.cc

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

#include "cabkws/audio/fbank.h"

#include <algorithm>
#include <numbers>

#include "cabkws/common/binary_io.h"
#include "cabkws/common/error.h"

namespace cabkws {

int FbankConfig::WindowLength() const {
  return static_cast<int>(std::lround(sample_rate * frame_length_ms / 1000.0));
}

int FbankConfig::WindowShift() const {
  return static_cast<int>(std::lround(sample_rate * frame_shift_ms / 1000.0));
}

int FbankConfig::NumFrames(std::size_t num_samples) const {
  const auto win = static_cast<std::size_t>(WindowLength());
  if (num_samples < win) return 0;
  return 1 + static_cast<int>((num_samples - win) / static_cast<std::size_t>(WindowShift()));
}

double MelScale(double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); }

double InverseMelScale(double mel) { return 700.0 * (std::exp(mel / 1127.0) - 1.0); }

FbankComputer::FbankComputer(const FbankConfig& config) : config_(config) {
  const int win = config_.WindowLength();
  if (config_.sample_rate <= 0 || win <= 1 || config_.WindowShift() <= 0)
    throw ConfigError("fbank: invalid framing parameters");
  if (config_.fft_size < win || (config_.fft_size & (config_.fft_size - 1)) != 0)
    throw ConfigError("fbank: fft_size must be a power of two >= window length");
  const double nyquist = 0.5 * config_.sample_rate;
  if (config_.low_freq < 0.0 || config_.high_freq > nyquist ||
      config_.high_freq <= config_.low_freq)
    throw ConfigError("fbank: mel range must satisfy 0 <= low < high <= nyquist");
  if (config_.num_mel_bins < 1) throw ConfigError("fbank: num_mel_bins must be >= 1");

  window_.resize(win);
  for (int n = 0; n < win; ++n)
    window_[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (win - 1));

  const int num_bins = config_.fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(config_.sample_rate) / config_.fft_size;
  const double mel_low = MelScale(config_.low_freq);
  const double mel_high = MelScale(config_.high_freq);
  const double delta = (mel_high - mel_low) / (config_.num_mel_bins + 1);
  mel_banks_ = Mat<double>::Zero(config_.num_mel_bins, num_bins);
  for (int m = 0; m < config_.num_mel_bins; ++m) {
    const double left = mel_low + m * delta;
    const double center = left + delta;
    const double right = center + delta;
    for (int k = 0; k < num_bins; ++k) {
      const double mel = MelScale(k * bin_hz);
      if (mel > left && mel < right) {
        mel_banks_(m, k) = mel <= center ? (mel - left) / (center - left)
                                         : (right - mel) / (right - center);
      }
    }
  }
  fft_.SetFlag(Eigen::FFT<double>::HalfSpectrum);
}

double FbankComputer::CenterFrequency(int m) const {
  const double mel_low = MelScale(config_.low_freq);
  const double mel_high = MelScale(config_.high_freq);
  const double delta = (mel_high - mel_low) / (config_.num_mel_bins + 1);
  return InverseMelScale(mel_low + (m + 1) * delta);
}

FbankMatrix FbankComputer::Compute(const Waveform& wave) const {
  const int num_frames = config_.NumFrames(wave.size());
  if (num_frames == 0)
    throw DomainError("fbank: waveform shorter than one analysis window");
  const int win = config_.WindowLength();
  const int shift = config_.WindowShift();
  const int num_bins = config_.fft_size / 2 + 1;
  const double floor_energy = std::exp(config_.log_floor);

  FbankMatrix out;
  out.frames.resize(num_frames, config_.num_mel_bins);
  std::vector<double> frame(config_.fft_size, 0.0);
  std::vector<std::complex<double>> spectrum;
  Vec<double> power(num_bins);
  for (int t = 0; t < num_frames; ++t) {
    const double* src = wave.samples.data() + static_cast<std::size_t>(t) * shift;
    double mean = 0.0;
    for (int n = 0; n < win; ++n) mean += src[n];
    mean /= win;
    for (int n = 0; n < win; ++n) frame[n] = (src[n] - mean) * window_[n];
    std::fill(frame.begin() + win, frame.end(), 0.0);
    fft_.fwd(spectrum, frame);
    for (int k = 0; k < num_bins; ++k) power[k] = std::norm(spectrum[k]);
    const Vec<double> energies = mel_banks_ * power;
    for (int m = 0; m < config_.num_mel_bins; ++m) {
      out.frames(t, m) = energies[m] > floor_energy ? std::log(energies[m])
                                                    : config_.log_floor;
    }
  }
  return out;
}

FbankMatrix ComputeFbank(const Waveform& wave, const FbankConfig& config) {
  return FbankComputer(config).Compute(wave);
}

FbankMatrix FitFrames(const FbankMatrix& feats, int num_frames) {
  FbankMatrix out;
  out.frames = Mat<double>::Zero(num_frames, feats.Dim());
  const int keep = std::min(num_frames, feats.NumFrames());
  out.frames.topRows(keep) = feats.frames.topRows(keep);
  return out;
}

void WriteFbankFile(const std::string& path, const FbankMatrix& feats) {
  std::vector<uint8_t> out;
  out.reserve(16 + 4 * feats.frames.size());
  binary::PutBytes(out, "FBNK");
  binary::PutU32(out, static_cast<uint32_t>(feats.NumFrames()));
  binary::PutU32(out, static_cast<uint32_t>(feats.Dim()));
  binary::PutU32(out, 0);
  for (int t = 0; t < feats.NumFrames(); ++t)
    for (int d = 0; d < feats.Dim(); ++d)
      binary::PutF32(out, static_cast<float>(feats.frames(t, d)));
  binary::WriteFileAtomic(path, out);
}

FbankMatrix ReadFbankFile(const std::string& path) {
  const std::vector<uint8_t> bytes = binary::ReadFile(path);
  binary::Reader r(bytes);
  if (r.remaining() < 16 || r.Bytes(4) != "FBNK")
    throw ParseError(path + ": not an FBNK file");
  const uint32_t rows = r.U32();
  const uint32_t cols = r.U32();
  r.U32();
  if (static_cast<uint64_t>(rows) * cols * 4 != r.remaining())
    throw ParseError(path + ": payload size does not match header");
  FbankMatrix out;
  out.frames.resize(rows, cols);
  for (uint32_t t = 0; t < rows; ++t)
    for (uint32_t d = 0; d < cols; ++d) out.frames(t, d) = r.F32();
  return out;
}

}  // namespace cabkws
