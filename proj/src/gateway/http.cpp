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

#include "ehr/gateway/http.hpp"

#include <algorithm>
#include <cctype>

namespace ehr::gateway {

bool CaseInsensitiveLess::operator()(std::string_view a, std::string_view b) const noexcept {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) <
           std::tolower(static_cast<unsigned char>(y));
  });
}

std::optional<std::string> HttpRequest::header(std::string_view name) const {
  auto it = headers.find(name);
  if (it == headers.end()) return std::nullopt;
  return it->second;
}

std::string HttpRequest::bearer_token() const {
  auto h = header("Authorization");
  if (!h) return {};
  constexpr std::string_view kPrefix = "Bearer ";
  if (h->size() <= kPrefix.size()) return {};
  if (!std::equal(kPrefix.begin(), kPrefix.end(), h->begin(), [](char a, char b) {
        return std::tolower(static_cast<unsigned char>(a)) ==
               std::tolower(static_cast<unsigned char>(b));
      })) {
    return {};
  }
  return h->substr(kPrefix.size());
}

HttpResponse HttpResponse::json(int status, const nlohmann::json& body) {
  HttpResponse r;
  r.status = status;
  r.headers["Content-Type"] = "application/json";
  r.body = body.dump();
  return r;
}

HttpResponse HttpResponse::error(const Error& e) {
  nlohmann::json body = {{"error_kind", to_string(e.kind())}, {"layer", nullptr},
                         {"detail", e.what()}};
  if (!e.field_paths().empty()) body["fields"] = e.field_paths();
  return json(http_status(e.kind()), body);
}

HttpResponse HttpResponse::error(ErrorKind kind, std::string_view detail) {
  return error(Error(kind, std::string(detail)));
}

}  // namespace ehr::gateway
