// core/include/cabkws/common/json_fields.h

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

#ifndef CABKWS_COMMON_JSON_FIELDS_H_
#define CABKWS_COMMON_JSON_FIELDS_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "cabkws/common/error.h"

namespace cabkws::json_fields {

// Maps a JSON key to a struct member; used for strict (unknown keys
// rejected) config parsing.
template <typename S>
struct Field {
  const char* name;
  std::variant<int S::*, double S::*, bool S::*, std::string S::*, uint64_t S::*> member;
};

template <typename S>
void Write(nlohmann::json& j, const S& s, std::span<const Field<S>> fields) {
  j = nlohmann::json::object();
  for (const auto& f : fields)
    std::visit([&](auto m) { j[f.name] = s.*m; }, f.member);
}

template <typename S>
void Read(const nlohmann::json& j, S& s, std::span<const Field<S>> fields,
          const std::string& section) {
  if (!j.is_object()) throw ConfigError(section + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    const Field<S>* field = nullptr;
    for (const auto& f : fields)
      if (key == f.name) field = &f;
    if (field == nullptr) throw ConfigError(section + ": unknown key '" + key + "'");
    const std::string where = section + "." + key;
    std::visit(
        [&](auto m) {
          using V = std::remove_reference_t<decltype(s.*m)>;
          if constexpr (std::is_same_v<V, bool>) {
            if (!value.is_boolean()) throw ConfigError(where + ": expected a boolean");
            s.*m = value.template get<bool>();
          } else if constexpr (std::is_same_v<V, int>) {
            if (!value.is_number_integer()) throw ConfigError(where + ": expected an integer");
            s.*m = value.template get<int>();
          } else if constexpr (std::is_same_v<V, uint64_t>) {
            if (!value.is_number_unsigned()) throw ConfigError(where + ": expected an unsigned integer");
            s.*m = value.template get<uint64_t>();
          } else if constexpr (std::is_same_v<V, double>) {
            if (!value.is_number()) throw ConfigError(where + ": expected a number");
            s.*m = value.template get<double>();
          } else {
            if (!value.is_string()) throw ConfigError(where + ": expected a string");
            s.*m = value.template get<std::string>();
          }
        },
        field->member);
  }
}

}  // namespace cabkws::json_fields

#endif  // CABKWS_COMMON_JSON_FIELDS_H_
