// Copyright 2026 The ehrcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ehr/core/clock.hpp"

namespace ehr::security {

struct FieldError {
  std::string path;     // e.g. "treatments[1].name"
  std::string message;
};

// Declarative payload schemas, loaded from a document rather than written as
// code. Each schema is a closed set of fields; unknown fields are rejected.
//
// Field rule keys: type (string|number|bool|date|enum|string_list|object|
// object_list|map), required, min_length, values (enum), fields (object and
// object_list), keys/value (map; keys names a top-level key list such as
// "vitals_keys"), absent_when (sibling bool that forbids this field when
// true), not_after_today (dates).
class SchemaRegistry {
 public:
  static SchemaRegistry from_json(const nlohmann::json& document);
  // The schemas shipped in config/schemas.json, compiled in.
  static const SchemaRegistry& builtin();

  bool contains(std::string_view schema_id) const;
  std::vector<FieldError> validate(std::string_view schema_id, const nlohmann::json& payload,
                                   Timestamp now) const;
  const std::vector<std::string>& key_list(std::string_view name) const;

 private:
  nlohmann::json schemas_;
  std::map<std::string, std::vector<std::string>, std::less<>> key_lists_;
};

}  // namespace ehr::security
