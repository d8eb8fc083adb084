// core/src/model/checkpoint.cc

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

#include "cabkws/model/checkpoint.h"

#include <memory>

#include "cabkws/common/binary_io.h"
#include "cabkws/common/error.h"

namespace cabkws {

std::vector<uint8_t> EncodeCheckpoint(const Checkpoint& ckpt) {
  const ParamLayout& layout = ckpt.params.layout();
  if (!(layout.config() == ckpt.config))
    throw ConfigError("checkpoint: parameter layout does not match the model config");
  std::vector<uint8_t> out;
  binary::PutBytes(out, "CABK");
  binary::PutU32(out, kCheckpointVersion);
  nlohmann::json header;
  header["model"] = ckpt.config;
  header["meta"] = ckpt.meta;
  const std::string text = header.dump();
  binary::PutU32(out, static_cast<uint32_t>(text.size()));
  binary::PutBytes(out, text);

  binary::PutU32(out, static_cast<uint32_t>(layout.num_tensors()));
  for (const TensorSpec& t : layout.tensors()) {
    binary::PutU32(out, static_cast<uint32_t>(t.name.size()));
    binary::PutBytes(out, t.name);
    if (t.is_vector) {
      binary::PutU32(out, 1);
      binary::PutU32(out, static_cast<uint32_t>(t.cols));
    } else {
      binary::PutU32(out, 2);
      binary::PutU32(out, static_cast<uint32_t>(t.rows));
      binary::PutU32(out, static_cast<uint32_t>(t.cols));
    }
    binary::PutU64(out, t.offset);
  }
  for (float v : ckpt.params.flat()) binary::PutF32(out, v);
  return out;
}

Checkpoint DecodeCheckpoint(const std::vector<uint8_t>& bytes) {
  binary::Reader in(bytes);
  if (in.Bytes(4) != "CABK") throw ParseError("checkpoint: bad magic");
  const uint32_t version = in.U32();
  if (version != kCheckpointVersion)
    throw ParseError("checkpoint: unsupported version " + std::to_string(version));
  const std::string text = in.Bytes(in.U32());
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint: bad header: ") + e.what());
  }
  if (!header.is_object() || !header.contains("model"))
    throw ParseError("checkpoint: header lacks a model section");

  Checkpoint ckpt;
  ckpt.config = header.at("model").get<ModelConfig>();
  ckpt.meta = header.value("meta", nlohmann::json::object());
  auto layout = std::make_shared<const ParamLayout>(ckpt.config);

  const uint32_t count = in.U32();
  if (count != static_cast<uint32_t>(layout->num_tensors()))
    throw ConfigError("checkpoint: tensor count " + std::to_string(count) + " != " +
                      std::to_string(layout->num_tensors()));
  for (const TensorSpec& t : layout->tensors()) {
    const std::string name = in.Bytes(in.U32());
    const uint32_t ndim = in.U32();
    if (ndim < 1 || ndim > 2) throw ParseError("checkpoint: bad rank for " + name);
    std::size_t elems = 1;
    std::vector<uint32_t> dims;
    for (uint32_t k = 0; k < ndim; ++k) {
      dims.push_back(in.U32());
      elems *= dims.back();
    }
    const uint64_t offset = in.U64();
    if (name != t.name || elems != t.size() || offset != t.offset ||
        (ndim == 2 && (dims[0] != static_cast<uint32_t>(t.rows) ||
                       dims[1] != static_cast<uint32_t>(t.cols)))) {
      throw ConfigError("checkpoint: manifest entry '" + name + "' does not match '" + t.name +
                        "'");
    }
  }
  ckpt.params = ParamStore<float>(layout);
  in.Need(ckpt.params.size() * 4);
  for (float& v : ckpt.params.flat()) v = in.F32();
  if (in.remaining() != 0) throw ParseError("checkpoint: trailing bytes");
  return ckpt;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  binary::WriteFileAtomic(path, EncodeCheckpoint(ckpt));
}

Checkpoint LoadCheckpoint(const std::string& path) {
  return DecodeCheckpoint(binary::ReadFile(path));
}

}  // namespace cabkws
