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

#include "ehr/core/error.hpp"

namespace ehr {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::unauthorized: return "unauthorized";
    case ErrorKind::forbidden: return "forbidden";
    case ErrorKind::validation_error: return "validation_error";
    case ErrorKind::access_denied: return "access_denied";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::conflict: return "conflict";
    case ErrorKind::rate_limited: return "rate_limited";
    case ErrorKind::upstream_error: return "upstream_error";
    case ErrorKind::bad_gateway: return "bad_gateway";
    case ErrorKind::undefined_input: return "undefined_input";
    case ErrorKind::authentication_error: return "authentication_error";
    case ErrorKind::scope_error: return "scope_error";
    case ErrorKind::identity_error: return "identity_error";
    case ErrorKind::internal: return "internal";
  }
  return "internal";
}

int http_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::unauthorized:
    case ErrorKind::authentication_error: return 401;
    case ErrorKind::forbidden:
    case ErrorKind::access_denied:
    case ErrorKind::scope_error: return 403;
    case ErrorKind::not_found: return 404;
    case ErrorKind::conflict: return 409;
    case ErrorKind::validation_error:
    case ErrorKind::undefined_input: return 422;
    case ErrorKind::identity_error: return 400;
    case ErrorKind::rate_limited: return 429;
    case ErrorKind::bad_gateway:
    case ErrorKind::upstream_error: return 502;
    case ErrorKind::internal: return 500;
  }
  return 500;
}

Error::Error(ErrorKind kind, const std::string& detail,
             std::vector<std::string> field_paths)
    : std::runtime_error(detail),
      kind_(kind),
      field_paths_(std::move(field_paths)) {}

}  // namespace ehr
