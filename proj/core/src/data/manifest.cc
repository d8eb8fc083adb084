// core/src/data/manifest.cc

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

#include "cabkws/data/manifest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cabkws/common/error.h"

namespace cabkws {
namespace {

std::string QuoteCsv(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> SplitCsvLine(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("manifest line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kEval: return "eval";
  }
  return "train";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "eval") return Split::kEval;
  throw ParseError("unknown split '" + std::string(name) + "'");
}

std::vector<std::size_t> Manifest::Indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].split == split) out.push_back(i);
  return out;
}

std::vector<std::size_t> Manifest::LabeledIndices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].split == split && entries[i].label != kUnlabeled) out.push_back(i);
  return out;
}

void Manifest::Validate() const {
  if (num_classes < 1) throw ConfigError("manifest: num_classes must be >= 1");
  std::set<std::string_view> seen;
  for (const auto& e : entries) {
    if (e.utterance_id.empty()) throw ConfigError("manifest: empty utterance_id");
    if (!seen.insert(e.utterance_id).second)
      throw ConfigError("manifest: duplicate utterance_id " + e.utterance_id);
    if (e.label != kUnlabeled && (e.label < 0 || e.label >= num_classes))
      throw ConfigError("manifest: label " + std::to_string(e.label) + " of " +
                        e.utterance_id + " outside [0, " + std::to_string(num_classes) + ")");
  }
}

Split HashSplit(std::string_view utterance_id) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : utterance_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  const uint64_t bucket = h % 100;
  if (bucket < 80) return Split::kTrain;
  if (bucket < 90) return Split::kDev;
  return Split::kEval;
}

void WriteManifestCsv(const std::string& path, const Manifest& manifest) {
  manifest.Validate();
  std::ostringstream os;
  os << "utterance_id,path,label,split\n";
  for (const auto& e : manifest.entries) {
    os << QuoteCsv(e.utterance_id) << ',' << QuoteCsv(e.path) << ',' << e.label << ','
       << SplitName(e.split) << '\n';
  }
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << os.str();
  }
  nlohmann::json meta = {{"num_classes", manifest.num_classes}};
  for (const auto& [k, v] : manifest.metadata) meta["metadata"][k] = v;
  std::ofstream out(path + ".meta.json", std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path + ".meta.json");
  out << meta.dump(2) << '\n';
}

Manifest ReadManifestCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path);
  Manifest m;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = SplitCsvLine(line, line_no);
    if (header) {
      if (fields != std::vector<std::string>{"utterance_id", "path", "label", "split"})
        throw ParseError(path + ": expected header utterance_id,path,label,split");
      header = false;
      continue;
    }
    if (fields.size() != 4)
      throw ParseError(path + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields");
    ManifestEntry e;
    e.utterance_id = fields[0];
    e.path = fields[1];
    try {
      std::size_t used = 0;
      e.label = std::stoi(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": bad label '" +
                       fields[2] + "'");
    }
    e.split = ParseSplit(fields[3]);
    m.entries.push_back(std::move(e));
  }
  if (header) throw ParseError(path + ": missing header");

  const std::string meta_path = path + ".meta.json";
  if (std::filesystem::exists(meta_path)) {
    std::ifstream meta_in(meta_path);
    try {
      const auto meta = nlohmann::json::parse(meta_in);
      m.num_classes = meta.value("num_classes", 12);
      if (meta.contains("metadata"))
        for (const auto& [k, v] : meta["metadata"].items()) m.metadata[k] = v.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(meta_path + ": " + e.what());
    }
  } else {
    int max_label = -1;
    for (const auto& e : m.entries) max_label = std::max(max_label, e.label);
    m.num_classes = std::max(12, max_label + 1);
  }
  m.Validate();
  return m;
}

}  // namespace cabkws
