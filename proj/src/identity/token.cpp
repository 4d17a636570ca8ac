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

#include "ehr/identity/token.hpp"

#include "ehr/core/crypto.hpp"
#include "ehr/core/error.hpp"

namespace ehr::identity {
namespace {

const std::string& encoded_header() {
  static const std::string h =
      crypto::base64url_encode(R"({"alg":"HS256","typ":"JWT"})");
  return h;
}

[[noreturn]] void reject(const char* why) {
  throw Error(ErrorKind::unauthorized, why);
}

}  // namespace

TokenSigner::TokenSigner(std::string key) : key_(std::move(key)) {
  if (key_.size() < 16) {
    throw Error(ErrorKind::internal, "signing key must be at least 16 bytes");
  }
}

std::string TokenSigner::sign(const PrincipalClaims& claims) const {
  std::string signing_input =
      encoded_header() + "." + crypto::base64url_encode(to_wire(claims).dump());
  const auto sig = crypto::hmac_sha256(key_, signing_input);
  return signing_input + "." + crypto::base64url_encode(sig);
}

PrincipalClaims TokenSigner::verify(std::string_view token) const {
  const auto first = token.find('.');
  const auto second = first == std::string_view::npos ? first : token.find('.', first + 1);
  if (second == std::string_view::npos || token.find('.', second + 1) != std::string_view::npos) {
    reject("token is not three-part");
  }
  const auto header = crypto::base64url_decode(token.substr(0, first));
  const auto signature = crypto::base64url_decode(token.substr(second + 1));
  if (!header || !signature) reject("token encoding invalid");

  nlohmann::json header_json = nlohmann::json::parse(*header, nullptr, false);
  if (!header_json.is_object() || header_json.value("alg", "") != "HS256") {
    reject("unsupported token algorithm");
  }
  const auto expected = crypto::hmac_sha256(key_, token.substr(0, second));
  if (!crypto::constant_time_equal(expected, *signature)) reject("bad signature");

  const auto payload = crypto::base64url_decode(token.substr(first + 1, second - first - 1));
  if (!payload) reject("token encoding invalid");
  nlohmann::json payload_json = nlohmann::json::parse(*payload, nullptr, false);
  if (payload_json.is_discarded()) reject("payload is not a document");
  return from_wire(payload_json);
}

}  // namespace ehr::identity
