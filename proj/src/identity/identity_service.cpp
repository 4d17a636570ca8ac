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

#include "ehr/identity/identity_service.hpp"

#include <algorithm>

#include "ehr/core/crypto.hpp"
#include "ehr/core/error.hpp"

namespace ehr::identity {

IdentityService::IdentityService(IdentityConfig config, const Clock& clock,
                                 PrincipalLookup lookup)
    : config_(std::move(config)),
      clock_(clock),
      lookup_(std::move(lookup)),
      signer_(config_.signing_key) {
  if (config_.audiences.empty()) {
    throw Error(ErrorKind::internal, "at least one audience is required");
  }
}

std::string IdentityService::issue_user_token(std::string_view principal_id, Role role,
                                              std::chrono::seconds ttl) const {
  if (role == Role::service) {
    throw Error(ErrorKind::identity_error,
                "service principals obtain tokens via client credentials");
  }
  if (ttl.count() <= 0) throw Error(ErrorKind::identity_error, "invalid ttl");
  const auto registered = lookup_ ? lookup_(principal_id) : std::nullopt;
  if (!registered) throw Error(ErrorKind::identity_error, "unknown principal");
  if (*registered != role) {
    throw Error(ErrorKind::identity_error, "principal is not registered with that role");
  }

  PrincipalClaims c;
  c.subject = std::string(principal_id);
  c.issuer = config_.issuer;
  c.roles = {role};
  c.permissions = permissions_for(role);
  c.audiences = config_.audiences;
  c.issued_at = unix_seconds(clock_.now());
  c.expires_at = c.issued_at + ttl.count();
  c.grant_type = GrantType::password;
  return signer_.sign(c);
}

void IdentityService::register_service(const ServiceCredential& credential) {
  StoredCredential stored;
  stored.salt = crypto::random_bytes(16);
  stored.secret_hash = crypto::derive_key(credential.client_secret, stored.salt);
  stored.allowed_scopes = credential.allowed_scopes;
  std::unique_lock lock(mu_);
  services_.insert_or_assign(credential.client_id, std::move(stored));
}

std::string IdentityService::issue_service_token(
    std::string_view client_id, std::string_view client_secret,
    const std::set<std::string>& requested_scopes) {
  std::shared_lock lock(mu_);
  auto it = services_.find(client_id);
  if (it == services_.end()) {
    throw Error(ErrorKind::authentication_error, "invalid client credentials");
  }
  {
    std::lock_guard check(*it->second.check_mu);
    const auto hash = crypto::derive_key(client_secret, it->second.salt);
    if (!crypto::constant_time_equal(hash, it->second.secret_hash)) {
      throw Error(ErrorKind::authentication_error, "invalid client credentials");
    }
  }
  for (const auto& s : requested_scopes) {
    if (!it->second.allowed_scopes.count(s)) {
      throw Error(ErrorKind::scope_error, "scope not allowed: " + s);
    }
  }

  PrincipalClaims c;
  c.subject = std::string(client_id);
  c.issuer = config_.issuer;
  c.roles = {Role::service};
  c.audiences = config_.audiences;
  c.issued_at = unix_seconds(clock_.now());
  c.expires_at = c.issued_at + config_.service_token_ttl.count();
  c.scopes = requested_scopes;
  c.grant_type = GrantType::client_credentials;
  return signer_.sign(c);
}

PrincipalClaims IdentityService::validate_token(std::string_view token,
                                                std::string_view expected_audience,
                                                std::int64_t now) const {
  PrincipalClaims c = signer_.verify(token);
  if (c.issuer != config_.issuer) throw Error(ErrorKind::unauthorized, "untrusted issuer");
  if (now >= c.expires_at) throw Error(ErrorKind::unauthorized, "token expired");
  if (std::find(c.audiences.begin(), c.audiences.end(), expected_audience) ==
      c.audiences.end()) {
    throw Error(ErrorKind::unauthorized, "audience mismatch");
  }
  return c;
}

PrincipalClaims IdentityService::validate_token(std::string_view token) const {
  return validate_token(token, default_audience(), unix_seconds(clock_.now()));
}

void IdentityService::set_password(std::string_view principal_id,
                                   std::string_view password) {
  if (password.size() < 8) {
    throw Error(ErrorKind::validation_error, "password must be at least 8 characters",
                {"password"});
  }
  StoredPassword stored;
  stored.salt = crypto::random_bytes(16);
  stored.hash = crypto::derive_key(password, stored.salt);
  std::unique_lock lock(mu_);
  passwords_.insert_or_assign(std::string(principal_id), std::move(stored));
}

std::string IdentityService::login(std::string_view principal_id,
                                   std::string_view password,
                                   std::chrono::seconds ttl) const {
  {
    std::shared_lock lock(mu_);
    auto it = passwords_.find(principal_id);
    if (it == passwords_.end() ||
        !crypto::constant_time_equal(crypto::derive_key(password, it->second.salt),
                                     it->second.hash)) {
      throw Error(ErrorKind::authentication_error, "invalid username or password");
    }
  }
  const auto role = lookup_ ? lookup_(principal_id) : std::nullopt;
  if (!role) throw Error(ErrorKind::authentication_error, "invalid username or password");
  return issue_user_token(principal_id, *role, ttl);
}

}  // namespace ehr::identity
