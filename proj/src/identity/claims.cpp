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

#include "ehr/identity/claims.hpp"

#include <sstream>

#include "ehr/core/error.hpp"

namespace ehr::identity {
namespace {

constexpr std::string_view kGtyPassword = "password";
constexpr std::string_view kGtyClientCredentials = "client-credentials";

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorKind::unauthorized, "malformed token payload: " + what);
}

}  // namespace

nlohmann::json to_wire(const PrincipalClaims& c) {
  nlohmann::json j;
  nlohmann::json roles = nlohmann::json::array();
  for (Role r : c.roles) roles.push_back(to_string(r));
  j["user_roles"] = std::move(roles);
  j["iss"] = c.issuer;
  j["sub"] = c.subject;
  j["aud"] = c.audiences;
  j["iat"] = c.issued_at;
  j["exp"] = c.expires_at;
  if (c.grant_type == GrantType::client_credentials) {
    std::string joined;
    for (const auto& s : c.scopes) {
      if (!joined.empty()) joined += ' ';
      joined += s;
    }
    j["scope"] = joined;
    j["gty"] = kGtyClientCredentials;
  } else {
    j["gty"] = kGtyPassword;
    j["permissions"] = c.permissions;
  }
  return j;
}

PrincipalClaims from_wire(const nlohmann::json& j) {
  if (!j.is_object()) malformed("not an object");
  PrincipalClaims c;
  try {
    c.subject = j.at("sub").get<std::string>();
    c.issuer = j.value("iss", std::string{});
    for (const auto& r : j.at("user_roles")) {
      auto role = role_from_string(r.get<std::string>());
      if (!role) malformed("unknown role");
      c.roles.insert(*role);
    }
    const auto& aud = j.at("aud");
    if (aud.is_string()) {
      c.audiences.push_back(aud.get<std::string>());
    } else {
      c.audiences = aud.get<std::vector<std::string>>();
    }
    c.issued_at = j.at("iat").get<std::int64_t>();
    c.expires_at = j.at("exp").get<std::int64_t>();
    const auto gty = j.at("gty").get<std::string>();
    if (gty == kGtyClientCredentials) {
      c.grant_type = GrantType::client_credentials;
      std::istringstream in(j.value("scope", std::string{}));
      for (std::string s; in >> s;) c.scopes.insert(s);
    } else if (gty == kGtyPassword) {
      c.grant_type = GrantType::password;
      if (j.contains("permissions")) {
        for (const auto& p : j.at("permissions")) {
          auto name = p.get<std::string>();
          if (!is_known_permission(name)) malformed("unknown permission " + name);
          c.permissions.insert(std::move(name));
        }
      }
    } else {
      malformed("unknown grant type");
    }
  } catch (const nlohmann::json::exception& e) {
    malformed(e.what());
  }
  if (c.expires_at <= c.issued_at) malformed("exp <= iat");
  const bool service_role = c.has_role(Role::service);
  if (c.is_service() != service_role || (service_role && c.roles.size() != 1)) {
    malformed("role does not match grant type");
  }
  return c;
}

}  // namespace ehr::identity
