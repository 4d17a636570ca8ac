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

#include <string>
#include <string_view>

#include "ehr/identity/claims.hpp"

namespace ehr::identity {

// HS256 three-part bearer token: base64url(header).base64url(payload).
// base64url(HMAC-SHA256(key, header.payload)).
class TokenSigner {
 public:
  explicit TokenSigner(std::string key);

  std::string sign(const PrincipalClaims& claims) const;

  // Signature and structure only; expiry and audience are the caller's call.
  // Throws Error(unauthorized).
  PrincipalClaims verify(std::string_view token) const;

 private:
  std::string key_;
};

}  // namespace ehr::identity
