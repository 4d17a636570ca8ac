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

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ehr/identity/permissions.hpp"

namespace ehr::identity {

enum class GrantType { password, client_credentials };

// Decoded bearer-token payload. User principals carry roles and permissions;
// service principals carry the single role `service` and a scope set.
struct PrincipalClaims {
  std::string subject;
  std::string issuer;
  std::set<Role> roles;
  std::set<std::string> permissions;
  std::vector<std::string> audiences;
  std::int64_t issued_at = 0;
  std::int64_t expires_at = 0;
  std::set<std::string> scopes;
  GrantType grant_type = GrantType::password;

  bool has_role(Role r) const { return roles.count(r) != 0; }
  bool has_permission(std::string_view p) const {
    return permissions.count(std::string(p)) != 0;
  }
  bool has_scope(std::string_view s) const { return scopes.count(std::string(s)) != 0; }
  bool is_service() const { return grant_type == GrantType::client_credentials; }

  bool operator==(const PrincipalClaims&) const = default;
};

// Wire payload using the identity provider's claim names: sub, iss,
// user_roles, permissions, aud, iat, exp, scope (space-joined), gty.
nlohmann::json to_wire(const PrincipalClaims& claims);
// Throws Error(unauthorized) on a malformed payload or an invariant breach
// (exp <= iat, unknown role or permission).
PrincipalClaims from_wire(const nlohmann::json& payload);

}  // namespace ehr::identity
