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

#include "ehr/security/schema.hpp"

#include <algorithm>

#include "ehr/core/error.hpp"
#include "ehr/core/time_format.hpp"
#include "ehr_generated/embedded_config.hpp"

namespace ehr::security {
namespace {

using nlohmann::json;

class Validator {
 public:
  Validator(const SchemaRegistry& registry, Timestamp now) : registry_(registry), now_(now) {}

  void object(const json& fields, const json& value, const std::string& path) {
    if (!value.is_object()) {
      fail(path.empty() ? "$" : path, "expected an object");
      return;
    }
    for (const auto& [name, rule] : fields.items()) {
      const auto field_path = join(path, name);
      if (!value.contains(name)) {
        if (rule.value("required", false)) fail(field_path, "required field missing");
        continue;
      }
      if (rule.contains("absent_when")) {
        const auto sibling = rule.at("absent_when").get<std::string>();
        if (value.contains(sibling) && value.at(sibling).is_boolean() &&
            value.at(sibling).get<bool>()) {
          fail(field_path, "must be absent when " + sibling + " is true");
          continue;
        }
      }
      field(rule, value.at(name), field_path);
    }
    for (const auto& [name, v] : value.items()) {
      if (!fields.contains(name)) fail(join(path, name), "unknown field");
    }
  }

  std::vector<FieldError> take() { return std::move(errors_); }

 private:
  static std::string join(const std::string& path, const std::string& name) {
    return path.empty() ? name : path + "." + name;
  }

  void fail(std::string path, std::string message) {
    errors_.push_back({std::move(path), std::move(message)});
  }

  void field(const json& rule, const json& v, const std::string& path) {
    const auto type = rule.at("type").get<std::string>();
    if (type == "string") {
      if (!v.is_string()) return fail(path, "expected a string");
      if (v.get_ref<const std::string&>().size() < rule.value("min_length", 0u)) {
        fail(path, "must not be empty");
      }
    } else if (type == "number") {
      if (!v.is_number()) fail(path, "expected a number");
    } else if (type == "bool") {
      if (!v.is_boolean()) fail(path, "expected a boolean");
    } else if (type == "date") {
      if (!v.is_string()) return fail(path, "expected a date string");
      auto d = parse_date(v.get<std::string>());
      if (!d) return fail(path, "not a calendar date (YYYY-MM-DD)");
      if (rule.value("not_after_today", false) && to_timestamp(*d) > now_) {
        fail(path, "date is in the future");
      }
    } else if (type == "enum") {
      const auto& values = rule.at("values");
      if (!v.is_string() || std::find(values.begin(), values.end(), v) == values.end()) {
        fail(path, "value not in enumeration");
      }
    } else if (type == "string_list") {
      if (!v.is_array()) return fail(path, "expected a list");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) fail(path + "[" + std::to_string(i) + "]", "expected a string");
      }
    } else if (type == "object") {
      object(rule.at("fields"), v, path);
    } else if (type == "object_list") {
      if (!v.is_array()) return fail(path, "expected a list");
      for (std::size_t i = 0; i < v.size(); ++i) {
        object(rule.at("fields"), v[i], path + "[" + std::to_string(i) + "]");
      }
    } else if (type == "map") {
      if (!v.is_object()) return fail(path, "expected a map");
      const auto& keys = registry_.key_list(rule.at("keys").get<std::string>());
      for (const auto& [k, item] : v.items()) {
        const auto item_path = path + "." + k;
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
          fail(item_path, "key not allowed");
          continue;
        }
        field(rule.at("value"), item, item_path);
      }
    } else {
      throw Error(ErrorKind::internal, "schema uses unknown type " + type);
    }
  }

  const SchemaRegistry& registry_;
  Timestamp now_;
  std::vector<FieldError> errors_;
};

}  // namespace

SchemaRegistry SchemaRegistry::from_json(const nlohmann::json& document) {
  SchemaRegistry r;
  if (!document.contains("schemas") || !document.at("schemas").is_object()) {
    throw Error(ErrorKind::internal, "schema document lacks a schemas table");
  }
  r.schemas_ = document.at("schemas");
  for (const auto& [name, v] : document.items()) {
    if (v.is_array()) r.key_lists_[name] = v.get<std::vector<std::string>>();
  }
  return r;
}

const SchemaRegistry& SchemaRegistry::builtin() {
  static const SchemaRegistry r =
      from_json(nlohmann::json::parse(ehr_generated::kSchemasJson));
  return r;
}

bool SchemaRegistry::contains(std::string_view schema_id) const {
  return schemas_.contains(std::string(schema_id));
}

const std::vector<std::string>& SchemaRegistry::key_list(std::string_view name) const {
  auto it = key_lists_.find(name);
  if (it == key_lists_.end()) throw Error(ErrorKind::internal, "unknown key list");
  return it->second;
}

std::vector<FieldError> SchemaRegistry::validate(std::string_view schema_id,
                                                 const nlohmann::json& payload,
                                                 Timestamp now) const {
  if (!contains(schema_id)) {
    throw Error(ErrorKind::internal, "no schema named " + std::string(schema_id));
  }
  const auto& fields = schemas_.at(std::string(schema_id)).at("fields");
  Validator v(*this, now);
  if (payload.is_null() && fields.empty()) return {};
  v.object(fields, payload, "");
  return v.take();
}

}  // namespace ehr::security
