// tests/unit/audio_test.cc

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

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "cabkws/audio/augment.h"
#include "cabkws/audio/fbank.h"
#include "cabkws/audio/wav_io.h"
#include "cabkws/common/error.h"
#include "test_util.h"

namespace cabkws {
namespace {

using testing::MakeWavBytes;
using testing::TempDir;

Waveform Sine(double hz, std::size_t n, double amp = 0.5, int rate = 16000) {
  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / rate);
  return w;
}

Waveform RandomWave(std::size_t n, uint64_t seed, double amp = 0.4) {
  Rng rng(seed);
  Waveform w;
  w.samples.resize(n);
  for (double& s : w.samples) s = rng.Uniform(-amp, amp);
  return w;
}

// ------------------------------------------------------------------ WAV

TEST(WavTest, HeaderEcho) {
  std::vector<int16_t> pcm(16000);
  for (std::size_t i = 0; i < pcm.size(); ++i) pcm[i] = static_cast<int16_t>(i % 2000 - 1000);
  const auto bytes = MakeWavBytes(pcm, 16000);
  const Waveform w = DecodeWav(bytes);
  EXPECT_EQ(w.size(), 16000u);
  EXPECT_EQ(w.sample_rate, 16000);
  for (std::size_t i = 0; i < pcm.size(); ++i) ASSERT_EQ(w.samples[i], pcm[i] / 32768.0);
}

TEST(WavTest, MinimumSampleIsMinusOne) {
  const Waveform w = DecodeWav(MakeWavBytes({-32768, 0, 32767}, 16000));
  EXPECT_EQ(w.samples[0], -1.0);
  EXPECT_EQ(w.samples[1], 0.0);
  EXPECT_EQ(w.samples[2], 32767.0 / 32768.0);
}

TEST(WavTest, EightBitIsUnsupported) {
  EXPECT_THROW(DecodeWav(MakeWavBytes({1, 2, 3, 4}, 16000, 1, 8)), UnsupportedFormatError);
}

TEST(WavTest, StereoIsUnsupported) {
  EXPECT_THROW(DecodeWav(MakeWavBytes({1, 2, 3, 4}, 16000, 2)), UnsupportedFormatError);
}

TEST(WavTest, FloatEncodingIsUnsupported) {
  EXPECT_THROW(DecodeWav(MakeWavBytes({1, 2}, 16000, 1, 16, 3)), UnsupportedFormatError);
}

TEST(WavTest, MalformedHeaderIsParseError) {
  auto bytes = MakeWavBytes({1, 2, 3}, 16000);
  bytes[0] = 'X';
  EXPECT_THROW(DecodeWav(bytes), ParseError);
  const std::vector<uint8_t> truncated(bytes.begin(), bytes.begin() + 20);
  EXPECT_THROW(DecodeWav(truncated), ParseError);
}

TEST(WavTest, EncodeDecodeRoundTrip) {
  const Waveform w = RandomWave(1000, 3, 0.9);
  const Waveform back = DecodeWav(EncodeWav(w));
  ASSERT_EQ(back.size(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(back.samples[i], w.samples[i], 0.5 / 32768);
}

TEST(WavTest, EncodeSaturates) {
  Waveform w;
  w.samples = {1.0, -1.0, 2.0, -2.0};
  const Waveform back = DecodeWav(EncodeWav(w));
  EXPECT_EQ(back.samples[0], 32767.0 / 32768.0);
  EXPECT_EQ(back.samples[1], -1.0);
  EXPECT_EQ(back.samples[2], 32767.0 / 32768.0);
  EXPECT_EQ(back.samples[3], -1.0);
}

TEST(WavTest, LoadResamplesToTargetRate) {
  TempDir dir("wav");
  const auto bytes = MakeWavBytes(std::vector<int16_t>(8000, 1000), 8000);
  std::ofstream(dir.File("a.wav"), std::ios::binary)
      .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  const Waveform native = LoadWav(dir.File("a.wav"));
  EXPECT_EQ(native.sample_rate, 8000);
  EXPECT_EQ(native.size(), 8000u);
  const Waveform up = LoadWav(dir.File("a.wav"), 16000);
  EXPECT_EQ(up.sample_rate, 16000);
  EXPECT_EQ(up.size(), 16000u);
  for (double s : up.samples) EXPECT_DOUBLE_EQ(s, 1000 / 32768.0);
}

TEST(WavTest, MissingFileIsIoError) {
  EXPECT_THROW(LoadWav("/nonexistent/x.wav"), IoError);
}

// ---------------------------------------------------------------- speed

TEST(SpeedTest, UnitFactorIsIdentity) {
  const Waveform w = RandomWave(16000, 1);
  const Waveform out = SpeedPerturb(w, 1.0);
  EXPECT_EQ(out.samples, w.samples);
  EXPECT_EQ(out.sample_rate, w.sample_rate);
}

TEST(SpeedTest, DoubleSpeedTakesEverySecondSample) {
  const Waveform w = RandomWave(16000, 2);
  const Waveform out = SpeedPerturb(w, 2.0);
  ASSERT_EQ(out.size(), 8000u);
  for (std::size_t n = 0; n < out.size(); ++n) ASSERT_EQ(out.samples[n], w.samples[2 * n]);
}

TEST(SpeedTest, OutputLengthIsRoundedRatio) {
  const Waveform w = RandomWave(16000, 3);
  EXPECT_EQ(SpeedPerturb(w, 1.1).size(), 14545u);
  EXPECT_EQ(SpeedPerturb(w, 0.8).size(), 20000u);
  EXPECT_EQ(SpeedPerturb(w, 1.1).sample_rate, 16000);
}

TEST(SpeedTest, InterpolatesLinearly) {
  Waveform w;
  w.samples = {0.0, 1.0, 0.0, -1.0};
  const Waveform out = SpeedPerturb(w, 0.5);
  ASSERT_EQ(out.size(), 8u);
  const std::vector<double> expect = {0.0, 0.5, 1.0, 0.5, 0.0, -0.5, -1.0, -1.0};
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_DOUBLE_EQ(out.samples[i], expect[i]);
}

TEST(SpeedTest, InverseFactorRestoresLength) {
  const Waveform w = RandomWave(16000, 4);
  for (double lambda : {0.8, 0.93, 1.1, 1.2, 1.37}) {
    const Waveform back = SpeedPerturb(SpeedPerturb(w, lambda), 1.0 / lambda);
    EXPECT_LE(std::abs(static_cast<long>(back.size()) - 16000L), 1L) << lambda;
  }
}

TEST(SpeedTest, NonPositiveFactorIsDomainError) {
  const Waveform w = RandomWave(100, 5);
  EXPECT_THROW(SpeedPerturb(w, 0.0), DomainError);
  EXPECT_THROW(SpeedPerturb(w, -1.0), DomainError);
}

// --------------------------------------------------------------- volume

TEST(VolumeTest, IdentityZeroAndClip) {
  Waveform w;
  w.samples = {0.8, -0.8, 0.2, 0.0};
  EXPECT_EQ(VolumePerturb(w, 1.0).samples, w.samples);
  for (double s : VolumePerturb(w, 0.0).samples) EXPECT_EQ(s, 0.0);
  const Waveform loud = VolumePerturb(w, 1.5);
  EXPECT_EQ(loud.samples[0], 1.0);
  EXPECT_EQ(loud.samples[1], -1.0);
  EXPECT_DOUBLE_EQ(loud.samples[2], 0.3);
  EXPECT_THROW(VolumePerturb(w, -0.1), DomainError);
}

TEST(VolumeTest, ComposesMultiplicativelyWithoutClipping) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Waveform w = RandomWave(500, 100 + trial, 0.4);
    const double a = rng.Uniform(0.1, 2.0);
    const double b = rng.Uniform(0.1, 2.0 / a);
    const Waveform twice = VolumePerturb(VolumePerturb(w, a), b);
    const Waveform once = VolumePerturb(w, a * b);
    for (std::size_t i = 0; i < w.size(); ++i)
      ASSERT_NEAR(twice.samples[i], once.samples[i], 1e-15);
  }
}

// ---------------------------------------------------------------- noise

double MeasuredSnrDb(const Waveform& clean, const std::vector<double>& noise) {
  double pc = 0.0, pn = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    pc += clean.samples[i] * clean.samples[i];
    pn += noise[i] * noise[i];
  }
  return 10.0 * std::log10(pc / pn);
}

TEST(MixNoiseTest, EqualPowerGains) {
  const Waveform clean = Sine(440.0, 16000);
  Waveform noise = clean;
  for (double& s : noise.samples) s = -s;
  EXPECT_NEAR(MixNoise(clean, noise, 0.0, 1).gain, 1.0, 1e-12);
  EXPECT_NEAR(MixNoise(clean, noise, 20.0, 1).gain, 0.1, 1e-12);
}

TEST(MixNoiseTest, PreClipSnrIsExact) {
  const Waveform clean = RandomWave(16000, 21, 0.6);
  const Waveform noise = SynthNoise(NoiseKind::kPink, 40000, 22);
  for (double snr : {0.0, 5.0, 10.0, 15.0, 20.0}) {
    const MixResult r = MixNoise(clean, noise, snr, 7);
    EXPECT_NEAR(MeasuredSnrDb(clean, r.scaled_noise), snr, 1e-9);
    for (double s : r.mixed.samples) ASSERT_LE(std::abs(s), 1.0);
  }
}

TEST(MixNoiseTest, ShortNoiseIsTiled) {
  const Waveform clean = RandomWave(1000, 23);
  const Waveform noise = RandomWave(300, 24);
  const MixResult r = MixNoise(clean, noise, 10.0, 5);
  EXPECT_EQ(r.mixed.size(), 1000u);
  for (std::size_t i = 0; i < clean.size(); ++i)
    ASSERT_DOUBLE_EQ(r.scaled_noise[i], r.gain * noise.samples[(r.offset + i) % 300]);
  EXPECT_NEAR(MeasuredSnrDb(clean, r.scaled_noise), 10.0, 1e-9);
}

TEST(MixNoiseTest, Errors) {
  Waveform zero;
  zero.samples.assign(100, 0.0);
  const Waveform noise = RandomWave(100, 1);
  EXPECT_THROW(MixNoise(zero, noise, 10.0, 0), DomainError);
  EXPECT_THROW(MixNoise(noise, zero, 10.0, 0), DomainError);
  Waveform other = noise;
  other.sample_rate = 8000;
  EXPECT_THROW(MixNoise(noise, other, 10.0, 0), DomainError);
}

TEST(MixNoiseTest, DeterministicPerSeed) {
  const Waveform clean = RandomWave(1000, 31);
  const Waveform noise = RandomWave(5000, 32);
  EXPECT_EQ(MixNoise(clean, noise, 3.0, 9).mixed.samples, MixNoise(clean, noise, 3.0, 9).mixed.samples);
}

TEST(SynthNoiseTest, WhiteAndPink) {
  const Waveform white = SynthNoise(NoiseKind::kWhite, 16000, 5);
  EXPECT_EQ(white.samples, SynthNoise(NoiseKind::kWhite, 16000, 5).samples);
  double mean = 0.0;
  for (double s : white.samples) {
    ASSERT_GE(s, -0.5);
    ASSERT_LT(s, 0.5);
    mean += s;
  }
  EXPECT_NEAR(mean / 16000.0, 0.0, 0.01);

  const Waveform pink = SynthNoise(NoiseKind::kPink, 16000, 5);
  EXPECT_EQ(pink.samples, SynthNoise(NoiseKind::kPink, 16000, 5).samples);
  double peak = 0.0;
  for (double s : pink.samples) peak = std::max(peak, std::abs(s));
  EXPECT_DOUBLE_EQ(peak, 0.5);
  EXPECT_THROW(SynthNoise(NoiseKind::kWhite, 0, 1), DomainError);
}

TEST(SynthNoiseTest, PinkHasMoreLowFrequencyEnergy) {
  // Lag-1 autocorrelation: about 0 for white noise, clearly positive for pink.
  auto lag1 = [](const Waveform& w) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i < w.size(); ++i) num += w.samples[i] * w.samples[i - 1];
    for (double s : w.samples) den += s * s;
    return num / den;
  };
  EXPECT_LT(std::abs(lag1(SynthNoise(NoiseKind::kWhite, 32000, 8))), 0.03);
  EXPECT_GT(lag1(SynthNoise(NoiseKind::kPink, 32000, 8)), 0.3);
}

TEST(AugmentTest, OrderIsSpeedVolumeNoise) {
  const Waveform w = RandomWave(16000, 41, 0.5);
  const Waveform noise = SynthNoise(NoiseKind::kWhite, 20000, 42);
  AugmentSpec spec;
  spec.lambda_speed = 1.1;
  spec.lambda_volume = 0.7;
  spec.snr_db = 12.0;
  spec.rng_seed = 43;
  const Waveform out = ApplyAugment(w, spec, &noise);
  const Waveform manual =
      MixNoise(VolumePerturb(SpeedPerturb(w, 1.1), 0.7), noise, 12.0, 43).mixed;
  EXPECT_EQ(out.samples, manual.samples);
  EXPECT_EQ(out.size(), 14545u);
}

TEST(AugmentTest, DrawsInsideRanges) {
  Rng rng(3);
  const AugmentRanges ranges;
  for (int i = 0; i < 200; ++i) {
    const AugmentSpec s = DrawAugmentSpec(ranges, true, rng);
    EXPECT_GE(s.lambda_speed, 0.8);
    EXPECT_LE(s.lambda_speed, 1.2);
    EXPECT_GE(s.lambda_volume, 0.5);
    EXPECT_LE(s.lambda_volume, 1.5);
    ASSERT_TRUE(s.snr_db.has_value());
    EXPECT_GE(*s.snr_db, 0.0);
    EXPECT_LE(*s.snr_db, 20.0);
  }
  EXPECT_FALSE(DrawAugmentSpec(ranges, false, rng).snr_db.has_value());
}

// ---------------------------------------------------------------- fbank

TEST(FbankTest, OneSecondGivesNinetyEightFrames) {
  const FbankComputer fbank;
  EXPECT_EQ(fbank.config().WindowLength(), 400);
  EXPECT_EQ(fbank.config().WindowShift(), 160);
  EXPECT_EQ(fbank.config().NumFrames(16000), 1 + (16000 - 400) / 160);
  const FbankMatrix m = fbank.Compute(Sine(1000.0, 16000));
  EXPECT_EQ(m.NumFrames(), 98);
  EXPECT_EQ(m.Dim(), 40);
  EXPECT_EQ(fbank.config().NumFrames(14545), 89);
}

TEST(FbankTest, SilenceIsFloor) {
  Waveform zero;
  zero.samples.assign(16000, 0.0);
  const FbankMatrix m = ComputeFbank(zero);
  EXPECT_TRUE((m.frames.array() == std::log(1e-10)).all());
}

TEST(FbankTest, EntriesNeverBelowFloor) {
  const FbankMatrix m = ComputeFbank(RandomWave(16000, 51, 1e-7));
  EXPECT_GE(m.frames.minCoeff(), std::log(1e-10));
}

TEST(FbankTest, ShortInputIsDomainError) {
  EXPECT_THROW(ComputeFbank(RandomWave(399, 1)), DomainError);
}

TEST(FbankTest, ToneLightsItsFilter) {
  const FbankComputer fbank;
  for (int m : {3, 10, 20, 30, 38}) {
    const FbankMatrix feats = fbank.Compute(Sine(fbank.CenterFrequency(m), 16000));
    for (int t = 1; t + 1 < feats.NumFrames(); ++t) {
      Eigen::Index arg;
      feats.frames.row(t).maxCoeff(&arg);
      ASSERT_EQ(arg, m) << "frame " << t;
    }
  }
}

TEST(FbankTest, MatchesDirectDftOracle) {
  const FbankComputer fbank;
  const Waveform w = RandomWave(1200, 61, 0.7);
  const FbankMatrix feats = fbank.Compute(w);
  const int win = 400, shift = 160, nfft = 512;
  for (int t = 0; t < feats.NumFrames(); ++t) {
    std::vector<double> frame(win);
    double mean = 0.0;
    for (int n = 0; n < win; ++n) mean += w.samples[t * shift + n] / win;
    for (int n = 0; n < win; ++n)
      frame[n] = (w.samples[t * shift + n] - mean) *
                 (0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (win - 1)));
    Vec<double> power(nfft / 2 + 1);
    for (int k = 0; k <= nfft / 2; ++k) {
      std::complex<double> acc = 0.0;
      for (int n = 0; n < win; ++n)
        acc += frame[n] * std::polar(1.0, -2.0 * std::numbers::pi * k * n / nfft);
      power[k] = std::norm(acc);
    }
    const Vec<double> energies = fbank.mel_banks() * power;
    for (int m = 0; m < 40; ++m)
      ASSERT_NEAR(feats.frames(t, m), std::log(energies[m]), 1e-9) << t << "," << m;
  }
}

TEST(FbankTest, FiltersAreTriangularAndSpanRange) {
  const FbankComputer fbank;
  const Mat<double>& banks = fbank.mel_banks();
  ASSERT_EQ(banks.rows(), 40);
  ASSERT_EQ(banks.cols(), 257);
  for (int m = 0; m < 40; ++m) {
    EXPECT_GT(banks.row(m).maxCoeff(), 0.0);
    EXPECT_LE(banks.row(m).maxCoeff(), 1.0);
    EXPECT_GE(banks.row(m).minCoeff(), 0.0);
  }
  EXPECT_GT(fbank.CenterFrequency(0), 20.0);
  EXPECT_LT(fbank.CenterFrequency(39), 7600.0);
  EXPECT_NEAR(InverseMelScale(MelScale(1234.5)), 1234.5, 1e-9);
}

TEST(FbankTest, VolumeShiftsByLogSquare) {
  const Waveform w = RandomWave(16000, 71, 0.5);
  const double c = 0.37;
  const FbankMatrix a = ComputeFbank(w);
  const FbankMatrix b = ComputeFbank(VolumePerturb(w, c));
  const double floor = std::log(1e-10);
  for (int t = 0; t < a.NumFrames(); ++t)
    for (int m = 0; m < a.Dim(); ++m)
      if (a.frames(t, m) > floor && b.frames(t, m) > floor)
        ASSERT_NEAR(b.frames(t, m), a.frames(t, m) + std::log(c * c), 1e-9);
}

TEST(FbankTest, FitFramesPadsAndTruncates) {
  FbankMatrix m;
  m.frames = Mat<double>::Constant(5, 3, 2.0);
  const FbankMatrix padded = FitFrames(m, 8);
  EXPECT_EQ(padded.NumFrames(), 8);
  EXPECT_TRUE((padded.frames.topRows(5).array() == 2.0).all());
  EXPECT_TRUE((padded.frames.bottomRows(3).array() == 0.0).all());
  EXPECT_EQ(FitFrames(m, 2).NumFrames(), 2);
}

TEST(FbankTest, FileRoundTripAndHeader) {
  TempDir dir("fbank");
  const FbankMatrix m = ComputeFbank(RandomWave(4000, 81));
  WriteFbankFile(dir.File("x.fb"), m);
  const auto bytes = testing::ReadBytes(dir.File("x.fb"));
  ASSERT_EQ(bytes.size(), 16u + 4u * static_cast<std::size_t>(m.frames.size()));
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "FBNK");
  EXPECT_EQ(bytes[4], static_cast<uint8_t>(m.NumFrames()));
  EXPECT_EQ(bytes[8], 40);
  const FbankMatrix back = ReadFbankFile(dir.File("x.fb"));
  ASSERT_EQ(back.NumFrames(), m.NumFrames());
  for (int t = 0; t < m.NumFrames(); ++t)
    for (int d = 0; d < 40; ++d)
      ASSERT_EQ(back.frames(t, d), static_cast<double>(static_cast<float>(m.frames(t, d))));
}

}  // namespace
}  // namespace cabkws
