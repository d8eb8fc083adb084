// core/src/data/speech_commands.cc

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

#include "cabkws/data/speech_commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "cabkws/audio/wav_io.h"
#include "cabkws/common/error.h"
#include "cabkws/data/segment.h"

namespace fs = std::filesystem;

namespace cabkws {
namespace {

std::set<std::string> ReadList(const std::string& path) {
  std::set<std::string> out;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open list file " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.insert(line);
  }
  return out;
}

std::vector<fs::path> SortedChildren(const fs::path& dir, bool want_dirs) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (want_dirs ? e.is_directory() : (e.is_regular_file() && e.path().extension() == ".wav"))
      out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t CountSegments(const fs::path& wav) {
  const Waveform w = LoadWav(wav.string(), kDefaultSampleRate);
  return NumSegments(w.size(), w.sample_rate);
}

}  // namespace

int SpeechCommandsClass(std::string_view word) {
  for (std::size_t i = 0; i < kCommandWords.size(); ++i)
    if (kCommandWords[i] == word) return static_cast<int>(i);
  if (word == kBackgroundNoiseDir || word == "silence") return kSilenceClass;
  return kUnknownClass;
}

Manifest IngestSpeechCommands(const std::string& root_dir,
                              const SpeechCommandsLists& lists) {
  const fs::path root(root_dir);
  if (!fs::is_directory(root)) throw IoError("speech commands root not found: " + root_dir);

  std::string val_path = lists.validation_list;
  std::string test_path = lists.testing_list;
  if (val_path.empty() && fs::exists(root / "validation_list.txt"))
    val_path = (root / "validation_list.txt").string();
  if (test_path.empty() && fs::exists(root / "testing_list.txt"))
    test_path = (root / "testing_list.txt").string();
  const bool have_lists = !val_path.empty() || !test_path.empty();
  const std::set<std::string> val = val_path.empty() ? std::set<std::string>{} : ReadList(val_path);
  const std::set<std::string> test = test_path.empty() ? std::set<std::string>{} : ReadList(test_path);

  Manifest m;
  m.num_classes = 12;
  m.metadata["source"] = "speech_commands";
  m.metadata["split_rule"] = have_lists ? "lists" : "hash";
  for (const fs::path& dir : SortedChildren(root, /*want_dirs=*/true)) {
    const std::string word = dir.filename().string();
    const auto files = SortedChildren(dir, /*want_dirs=*/false);
    if (files.empty()) {
      std::cerr << "WARNING: class folder '" << word << "' has no WAV files\n";
      continue;
    }
    if (word == kBackgroundNoiseDir) {
      for (const fs::path& f : files) {
        const std::string rel = word + "/" + f.filename().string();
        const std::size_t count = CountSegments(f);
        for (std::size_t k = 0; k < count; ++k) {
          ManifestEntry e;
          e.utterance_id = rel + "#" + std::to_string(k);
          e.path = e.utterance_id;
          e.label = kSilenceClass;
          e.split = HashSplit(e.utterance_id);
          m.entries.push_back(std::move(e));
        }
      }
      continue;
    }
    const int label = SpeechCommandsClass(word);
    for (const fs::path& f : files) {
      ManifestEntry e;
      e.utterance_id = word + "/" + f.filename().string();
      e.path = e.utterance_id;
      e.label = label;
      if (have_lists) {
        e.split = val.count(e.utterance_id) ? Split::kDev
                  : test.count(e.utterance_id) ? Split::kEval
                                               : Split::kTrain;
      } else {
        e.split = HashSplit(e.utterance_id);
      }
      m.entries.push_back(std::move(e));
    }
  }
  m.Validate();
  return m;
}

Manifest IngestUnlabeledDirectory(const std::string& root_dir) {
  const fs::path root(root_dir);
  if (!fs::is_directory(root)) throw IoError("directory not found: " + root_dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().extension() == ".wav") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  Manifest m;
  m.metadata["source"] = "unlabeled";
  for (const fs::path& f : files) {
    const std::string rel = fs::relative(f, root).generic_string();
    const std::size_t count = CountSegments(f);
    for (std::size_t k = 0; k < count; ++k) {
      ManifestEntry e;
      e.utterance_id = rel + "#" + std::to_string(k);
      e.path = e.utterance_id;
      e.split = HashSplit(e.utterance_id);
      m.entries.push_back(std::move(e));
    }
  }
  m.Validate();
  return m;
}

}  // namespace cabkws
