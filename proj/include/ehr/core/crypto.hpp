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

#include <optional>
#include <string>
#include <string_view>

// Thin wrappers over OpenSSL primitives. Byte strings are carried in
// std::string.
namespace ehr::crypto {

std::string base64url_encode(std::string_view bytes);
std::optional<std::string> base64url_decode(std::string_view text);

std::string hmac_sha256(std::string_view key, std::string_view message);
std::string sha256(std::string_view bytes);
std::string to_hex(std::string_view bytes);

// PBKDF2-HMAC-SHA256.
std::string derive_key(std::string_view secret, std::string_view salt,
                       int iterations = 10'000);
std::string random_bytes(std::size_t n);

bool constant_time_equal(std::string_view a, std::string_view b);

}  // namespace ehr::crypto
