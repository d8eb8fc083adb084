// core/include/cabkws/data/segment.h

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

#ifndef CABKWS_DATA_SEGMENT_H_
#define CABKWS_DATA_SEGMENT_H_

#include <vector>

#include "cabkws/audio/waveform.h"

namespace cabkws {

// Splits into consecutive non-overlapping segments of seg_len seconds. A
// trailing remainder shorter than half a segment is dropped; a longer one is
// zero-padded to a full segment.
std::vector<Waveform> Segment(const Waveform& wave, double seg_len_s = 1.0);

// Number of segments Segment() would return for num_samples samples.
std::size_t NumSegments(std::size_t num_samples, int sample_rate,
                        double seg_len_s = 1.0);

}  // namespace cabkws

#endif  // CABKWS_DATA_SEGMENT_H_
