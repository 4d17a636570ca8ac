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

#include <httplib.h>

#include "ehr/core/error.hpp"
#include "ehr/load/load.hpp"

namespace ehr::load {
namespace {

struct ParsedUrl {
  std::string origin;
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::validation_error, "url must include a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string synthetic_ip(int vu) {
  return "10." + std::to_string((vu >> 16) & 0xFF) + "." + std::to_string((vu >> 8) & 0xFF) +
         "." + std::to_string(vu & 0xFF);
}

httplib::Headers headers_for(const HttpTarget& target, int vu) {
  httplib::Headers h;
  if (!target.tokens.empty()) {
    h.emplace("Authorization", "Bearer " + target.tokens[vu % target.tokens.size()]);
  }
  if (target.synthetic_client_ips) h.emplace("X-Forwarded-For", synthetic_ip(vu));
  return h;
}

}  // namespace

void preflight(const HttpTarget& target) {
  const auto u = split_url(target.url);
  httplib::Client client(u.origin);
  client.set_connection_timeout(target.timeout);
  client.set_read_timeout(target.timeout);
  auto res = client.Get(u.path, headers_for(target, 0));
  if (!res) {
    throw Error(ErrorKind::upstream_error,
                "setup error: target unreachable (" + httplib::to_string(res.error()) + ")");
  }
}

VuFactory http_factory(const HttpTarget& target) {
  const auto u = split_url(target.url);
  return [u, target](int vu) -> VuRequest {
    auto client = std::make_shared<httplib::Client>(u.origin);
    client->set_keep_alive(true);
    client->set_connection_timeout(target.timeout);
    client->set_read_timeout(target.timeout);
    auto headers = headers_for(target, vu);
    return [client, headers, path = u.path]() -> int {
      auto res = client->Get(path, headers);
      return res ? res->status : 0;
    };
  };
}

}  // namespace ehr::load
