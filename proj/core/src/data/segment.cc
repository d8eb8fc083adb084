// core/src/data/segment.cc

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

#include "cabkws/data/segment.h"

#include <cmath>

#include "cabkws/common/error.h"

namespace cabkws {
namespace {

std::size_t SegmentLength(int sample_rate, double seg_len_s) {
  if (!(seg_len_s > 0.0)) throw DomainError("segment: seg_len must be > 0");
  const auto len = static_cast<std::size_t>(std::llround(seg_len_s * sample_rate));
  if (len == 0) throw DomainError("segment: segment shorter than one sample");
  return len;
}

}  // namespace

std::size_t NumSegments(std::size_t num_samples, int sample_rate, double seg_len_s) {
  const std::size_t len = SegmentLength(sample_rate, seg_len_s);
  const std::size_t full = num_samples / len;
  const std::size_t rem = num_samples % len;
  return full + (2 * rem >= len ? 1 : 0);
}

std::vector<Waveform> Segment(const Waveform& wave, double seg_len_s) {
  const std::size_t len = SegmentLength(wave.sample_rate, seg_len_s);
  const std::size_t count = NumSegments(wave.size(), wave.sample_rate, seg_len_s);
  std::vector<Waveform> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Waveform seg;
    seg.sample_rate = wave.sample_rate;
    seg.source_id = wave.source_id + "#" + std::to_string(k);
    seg.samples.assign(len, 0.0);
    const std::size_t begin = k * len;
    const std::size_t end = std::min(begin + len, wave.size());
    std::copy(wave.samples.begin() + static_cast<std::ptrdiff_t>(begin),
              wave.samples.begin() + static_cast<std::ptrdiff_t>(end), seg.samples.begin());
    out.push_back(std::move(seg));
  }
  return out;
}

}  // namespace cabkws
