// core/src/data/corpus.cc

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

#include "cabkws/data/corpus.h"

#include <filesystem>
#include <map>

#include "cabkws/audio/wav_io.h"
#include "cabkws/common/error.h"
#include "cabkws/data/segment.h"

namespace fs = std::filesystem;

namespace cabkws {
namespace {

std::string FileNameForId(const std::string& id) {
  std::string out = id;
  for (char& c : out)
    if (c == '/' || c == '#' || c == '\\' || c == ' ') c = '_';
  return out + ".wav";
}

}  // namespace

Waveform LoadEntryAudio(const ManifestEntry& entry, const std::string& base_dir) {
  std::string file = entry.path;
  long segment = -1;
  const auto hash = file.rfind('#');
  if (hash != std::string::npos && hash + 1 < file.size() &&
      file.find_first_not_of("0123456789", hash + 1) == std::string::npos) {
    segment = std::stol(file.substr(hash + 1));
    file.resize(hash);
  }
  fs::path p(file);
  if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
  Waveform w = LoadWav(p.string(), kDefaultSampleRate);
  if (segment >= 0) {
    auto segs = Segment(w);
    if (static_cast<std::size_t>(segment) >= segs.size())
      throw DomainError(entry.utterance_id + ": segment index out of range");
    w = std::move(segs[static_cast<std::size_t>(segment)]);
  }
  w.source_id = entry.utterance_id;
  return w;
}

Corpus LoadCorpus(const Manifest& manifest, const std::string& base_dir) {
  Corpus c;
  c.manifest = manifest;
  c.audio.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) c.audio.push_back(LoadEntryAudio(e, base_dir));
  return c;
}

Corpus LoadCorpus(const std::string& manifest_path) {
  const Manifest m = ReadManifestCsv(manifest_path);
  return LoadCorpus(m, fs::path(manifest_path).parent_path().string());
}

std::string WriteCorpus(const Corpus& corpus, const std::string& dir) {
  if (corpus.audio.size() != corpus.manifest.entries.size())
    throw DomainError("corpus: audio/manifest size mismatch");
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "wav", ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  Manifest m = corpus.manifest;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    m.entries[i].path = "wav/" + FileNameForId(m.entries[i].utterance_id);
    SaveWav((fs::path(dir) / m.entries[i].path).string(), corpus.audio[i]);
  }
  const std::string manifest_path = (fs::path(dir) / "manifest.csv").string();
  WriteManifestCsv(manifest_path, m);
  return manifest_path;
}

std::vector<std::size_t> LabeledSubset(const Manifest& manifest, Split split,
                                       int per_class) {
  std::vector<std::size_t> out;
  std::map<int, int> taken;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    if (e.split != split || e.label == kUnlabeled) continue;
    if (per_class > 0 && taken[e.label]++ >= per_class) continue;
    out.push_back(i);
  }
  return out;
}

}  // namespace cabkws
