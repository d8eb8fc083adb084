// core/include/cabkws/audio/fbank.h

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

#ifndef CABKWS_AUDIO_FBANK_H_
#define CABKWS_AUDIO_FBANK_H_

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "cabkws/audio/waveform.h"
#include "cabkws/common/tensor.h"

namespace cabkws {

struct FbankConfig {
  int sample_rate = kDefaultSampleRate;
  double frame_length_ms = 25.0;
  double frame_shift_ms = 10.0;
  int fft_size = 512;
  int num_mel_bins = 40;
  double low_freq = 20.0;
  double high_freq = 7600.0;
  double log_floor = std::log(1e-10);

  int WindowLength() const;
  int WindowShift() const;
  // 1 + floor((num_samples - window) / shift), or 0 if shorter than a window.
  int NumFrames(std::size_t num_samples) const;
};

// T x num_mel_bins matrix of natural-log mel energies.
struct FbankMatrix {
  Mat<double> frames;

  int NumFrames() const { return static_cast<int>(frames.rows()); }
  int Dim() const { return static_cast<int>(frames.cols()); }
};

// Mel scale used for filter placement: 1127 ln(1 + f / 700).
double MelScale(double hz);
double InverseMelScale(double mel);

class FbankComputer {
 public:
  explicit FbankComputer(const FbankConfig& config = {});

  // Per frame: DC removal, Hamming window, |DFT|^2, triangular mel filters,
  // log with floor. Throws DomainError if the input is shorter than a window.
  FbankMatrix Compute(const Waveform& wave) const;

  const FbankConfig& config() const { return config_; }
  // num_mel_bins x (fft_size / 2 + 1) filter weights.
  const Mat<double>& mel_banks() const { return mel_banks_; }
  // Center frequency of mel filter m in Hz.
  double CenterFrequency(int m) const;

 private:
  FbankConfig config_;
  std::vector<double> window_;
  Mat<double> mel_banks_;
  mutable Eigen::FFT<double> fft_;
};

FbankMatrix ComputeFbank(const Waveform& wave, const FbankConfig& config = {});

// Right-pads with zero frames or truncates to exactly num_frames rows.
FbankMatrix FitFrames(const FbankMatrix& feats, int num_frames);

// Binary layout: "FBNK", u32 T, u32 dim, u32 reserved (0), then T*dim
// little-endian float32 values, row-major.
void WriteFbankFile(const std::string& path, const FbankMatrix& feats);
FbankMatrix ReadFbankFile(const std::string& path);

}  // namespace cabkws

#endif  // CABKWS_AUDIO_FBANK_H_
