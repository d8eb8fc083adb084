// core/include/cabkws/data/corpus.h

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

#ifndef CABKWS_DATA_CORPUS_H_
#define CABKWS_DATA_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cabkws/audio/waveform.h"
#include "cabkws/data/manifest.h"

namespace cabkws {

// A manifest together with its decoded 16 kHz audio, one waveform per entry.
struct Corpus {
  Manifest manifest;
  std::vector<Waveform> audio;
};

// Loads one entry's audio at 16 kHz, honoring the "#k" segment suffix.
Waveform LoadEntryAudio(const ManifestEntry& entry, const std::string& base_dir);

Corpus LoadCorpus(const Manifest& manifest, const std::string& base_dir);
Corpus LoadCorpus(const std::string& manifest_path);

// Writes <dir>/wav/<id>.wav for every entry and <dir>/manifest.csv; entry
// paths are rewritten relative to dir. Returns the manifest path.
std::string WriteCorpus(const Corpus& corpus, const std::string& dir);

// Labeled entries of split, keeping at most per_class of each class (first in
// manifest order). per_class <= 0 keeps all of them.
std::vector<std::size_t> LabeledSubset(const Manifest& manifest, Split split,
                                       int per_class);

}  // namespace cabkws

#endif  // CABKWS_DATA_CORPUS_H_
