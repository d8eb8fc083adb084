// core/include/cabkws/data/speech_commands.h

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

#ifndef CABKWS_DATA_SPEECH_COMMANDS_H_
#define CABKWS_DATA_SPEECH_COMMANDS_H_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cabkws/data/manifest.h"

namespace cabkws {

inline constexpr std::array<std::string_view, 10> kCommandWords = {
    "yes", "no", "up", "down", "left", "right", "on", "off", "stop", "go"};
inline constexpr int kUnknownClass = 10;
inline constexpr int kSilenceClass = 11;
inline constexpr std::string_view kBackgroundNoiseDir = "_background_noise_";

// Command words map to 0..9, every other word folder to unknown (10).
int SpeechCommandsClass(std::string_view word);

struct SpeechCommandsLists {
  // Paths of validation/testing list files ("word/file.wav" per line). When
  // empty, "<root>/validation_list.txt" and "<root>/testing_list.txt" are
  // used if they exist; otherwise the split falls back to HashSplit.
  std::string validation_list;
  std::string testing_list;
};

// Builds a 12-class manifest from a <word>/<file>.wav tree. Background-noise
// clips become 1 s silence entries ("clip.wav#k"). Entry paths are relative
// to root_dir. Empty word folders produce a warning on stderr.
Manifest IngestSpeechCommands(const std::string& root_dir,
                              const SpeechCommandsLists& lists = {});

// Unlabeled pretraining manifest: every WAV under root_dir (recursively) cut
// into 1 s segments, hash-split.
Manifest IngestUnlabeledDirectory(const std::string& root_dir);

}  // namespace cabkws

#endif  // CABKWS_DATA_SPEECH_COMMANDS_H_
