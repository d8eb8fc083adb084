// core/include/cabkws/data/synth.h

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

#ifndef CABKWS_DATA_SYNTH_H_
#define CABKWS_DATA_SYNTH_H_

#include <cstdint>

#include "cabkws/data/corpus.h"

namespace cabkws {

// Generator settings for the synthetic keyword corpus.
struct SynthSpec {
  int n_classes = 12;
  int train_per_class = 200;
  int dev_per_class = 50;
  int eval_per_class = 50;
  uint64_t seed = 0;
};

// Class c sweeps linearly from f0 = 300 + 100 c Hz to f0 * ratio over the
// burst; ratio 1 is a steady tone.
struct ClassPrototype {
  double f0_hz = 0.0;
  double ratio = 1.0;
};

ClassPrototype PrototypeFor(int cls);

// One utterance: a 0.5 s burst of the class prototype with f0 jitter (+-3%),
// amplitude jitter (+-20%) and onset jitter (+-100 ms) inside a 1 s clip,
// plus white noise at an SNR drawn from [0, 20] dB.
Waveform SynthUtterance(int cls, uint64_t seed);

// Deterministic per spec. Entry ids are "synth_<split>_<class>_<k>"; the
// audio paths point at wav/<id>.wav so the result can be written with
// WriteCorpus as-is. n_classes != 12 is recorded in manifest metadata.
Corpus SynthDataset(const SynthSpec& spec);

}  // namespace cabkws

#endif  // CABKWS_DATA_SYNTH_H_
