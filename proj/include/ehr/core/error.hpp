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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ehr {

// Closed set of failure categories shared by every module. The HTTP layer maps
// each kind to exactly one status code (see http_status).
enum class ErrorKind {
  unauthorized,
  forbidden,
  validation_error,
  access_denied,
  not_found,
  conflict,
  rate_limited,
  upstream_error,
  bad_gateway,
  undefined_input,
  authentication_error,
  scope_error,
  identity_error,
  internal,
};

std::string_view to_string(ErrorKind kind) noexcept;
int http_status(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail,
        std::vector<std::string> field_paths = {});

  ErrorKind kind() const noexcept { return kind_; }
  // Offending field paths for validation errors, e.g. "treatments[0].dosage".
  const std::vector<std::string>& field_paths() const noexcept {
    return field_paths_;
  }

 private:
  ErrorKind kind_;
  std::vector<std::string> field_paths_;
};

}  // namespace ehr
