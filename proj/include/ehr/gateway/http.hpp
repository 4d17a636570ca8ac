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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ehr/core/error.hpp"

namespace ehr::gateway {

struct CaseInsensitiveLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const noexcept;
};

using Headers = std::map<std::string, std::string, CaseInsensitiveLess>;

// Transport-neutral request/response pair; the HTTP server adapts to these.
struct HttpRequest {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> query;
  Headers headers;
  std::string body;
  std::string remote_ip = "127.0.0.1";

  std::optional<std::string> header(std::string_view name) const;
  // Token from "Authorization: Bearer <token>", empty when absent.
  std::string bearer_token() const;
};

struct HttpResponse {
  int status = 200;
  Headers headers;
  std::string body;

  static HttpResponse json(int status, const nlohmann::json& body);
  // {error_kind, layer, detail} body with the kind's status code.
  static HttpResponse error(const Error& e);
  static HttpResponse error(ErrorKind kind, std::string_view detail);
};

using Upstream = std::function<HttpResponse(const HttpRequest&)>;

}  // namespace ehr::gateway
