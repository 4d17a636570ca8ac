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

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ehr/core/clock.hpp"
#include "ehr/identity/claims.hpp"
#include "ehr/identity/token.hpp"

namespace ehr::identity {

struct IdentityConfig {
  std::string signing_key;
  std::string issuer = "https://ehr.local/";
  std::vector<std::string> audiences = {"https://gateway-ehr-api.com"};
  std::chrono::seconds service_token_ttl{3600};
};

struct ServiceCredential {
  std::string client_id;
  std::string client_secret;
  std::set<std::string> allowed_scopes;
};

// Resolves a principal id to its registered role, if any.
using PrincipalLookup = std::function<std::optional<Role>(std::string_view)>;

// Self-contained token issuer and validator standing in for a hosted identity
// provider. Stateless validation; credential state behind a shared mutex.
class IdentityService {
 public:
  IdentityService(IdentityConfig config, const Clock& clock, PrincipalLookup lookup);

  const IdentityConfig& config() const { return config_; }
  const std::string& default_audience() const { return config_.audiences.front(); }

  std::string issue_user_token(std::string_view principal_id, Role role,
                               std::chrono::seconds ttl) const;

  void register_service(const ServiceCredential& credential);
  std::string issue_service_token(std::string_view client_id,
                                  std::string_view client_secret,
                                  const std::set<std::string>& requested_scopes);

  // Throws Error(unauthorized) on bad signature, expiry (now >= exp) or
  // audience mismatch; the detail text differs, the kind does not.
  PrincipalClaims validate_token(std::string_view token,
                                 std::string_view expected_audience,
                                 std::int64_t now) const;
  PrincipalClaims validate_token(std::string_view token) const;

  // Username/password login backing POST /auth/login.
  void set_password(std::string_view principal_id, std::string_view password);
  std::string login(std::string_view principal_id, std::string_view password,
                    std::chrono::seconds ttl) const;

 private:
  struct StoredCredential {
    std::string salt;
    std::string secret_hash;
    std::set<std::string> allowed_scopes;
    std::unique_ptr<std::mutex> check_mu = std::make_unique<std::mutex>();
  };
  struct StoredPassword {
    std::string salt;
    std::string hash;
  };

  IdentityConfig config_;
  const Clock& clock_;
  PrincipalLookup lookup_;
  TokenSigner signer_;

  mutable std::shared_mutex mu_;
  std::map<std::string, StoredCredential, std::less<>> services_;
  std::map<std::string, StoredPassword, std::less<>> passwords_;
};

}  // namespace ehr::identity
