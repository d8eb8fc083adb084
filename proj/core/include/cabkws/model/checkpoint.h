// core/include/cabkws/model/checkpoint.h

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

#ifndef CABKWS_MODEL_CHECKPOINT_H_
#define CABKWS_MODEL_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cabkws/model/config.h"
#include "cabkws/model/params.h"

namespace cabkws {

// Binary layout, all integers little-endian:
//   "CABK" | u32 version
//   u32 header_len | header_len bytes of JSON {"meta": ..., "model": ...}
//   u32 tensor_count, then per tensor:
//     u32 name_len | name | u32 ndim | u32 dims[ndim] | u64 offset
//   float32 data for every tensor in manifest order
// Offsets count floats from the start of the data section.
inline constexpr uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelConfig config;
  ParamStore<float> params;
  nlohmann::json meta = nlohmann::json::object();  // step, accuracy, ...
};

std::vector<uint8_t> EncodeCheckpoint(const Checkpoint& ckpt);
// Throws ParseError on malformed bytes and ConfigError when the manifest does
// not match the layout implied by the stored configuration.
Checkpoint DecodeCheckpoint(const std::vector<uint8_t>& bytes);

// Atomic write (temporary file + rename).
void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace cabkws

#endif  // CABKWS_MODEL_CHECKPOINT_H_
