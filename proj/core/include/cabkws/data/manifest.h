// core/include/cabkws/data/manifest.h

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

#ifndef CABKWS_DATA_MANIFEST_H_
#define CABKWS_DATA_MANIFEST_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cabkws {

enum class Split { kTrain, kDev, kEval };

inline constexpr int kUnlabeled = -1;

std::string_view SplitName(Split split);
Split ParseSplit(std::string_view name);

struct ManifestEntry {
  std::string utterance_id;
  // Audio path, relative to the manifest directory unless absolute. A
  // "#k" suffix selects the k-th 1 s segment of the file.
  std::string path;
  int label = kUnlabeled;
  Split split = Split::kTrain;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  int num_classes = 12;
  // Free-form annotations (generator seed, non-standard class count, ...).
  std::map<std::string, std::string> metadata;

  std::vector<std::size_t> Indices(Split split) const;
  std::vector<std::size_t> LabeledIndices(Split split) const;
  // Throws ConfigError on duplicate ids or labels outside [0, num_classes).
  void Validate() const;
};

// Deterministic 80/10/10 assignment from the FNV-1a hash of the id.
Split HashSplit(std::string_view utterance_id);

// CSV with header "utterance_id,path,label,split"; label -1 is unlabeled.
// Metadata and the class count go to a "<path>.meta.json" sidecar.
void WriteManifestCsv(const std::string& path, const Manifest& manifest);
Manifest ReadManifestCsv(const std::string& path);

}  // namespace cabkws

#endif  // CABKWS_DATA_MANIFEST_H_
