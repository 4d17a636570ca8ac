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

#include <nlohmann/json.hpp>

#include "ehr/ai/generator.hpp"
#include "ehr/core/error.hpp"

namespace ehr::ai {

std::string HttpGeneratorClient::generate(const std::string& system_role,
                                          const std::vector<ChatMessage>& messages) {
  const auto& url = config_.url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::upstream_error, "generator url must include a scheme");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  nlohmann::json body = {{"model", config_.model}, {"temperature", 0}};
  auto& msgs = body["messages"] = nlohmann::json::array();
  msgs.push_back({{"role", "system"}, {"content", system_role}});
  for (const auto& m : messages) {
    msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }

  httplib::Client client(origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorKind::upstream_error,
                "generator request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorKind::upstream_error,
                "generator returned status " + std::to_string(res->status));
  }
  try {
    auto reply = nlohmann::json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::upstream_error, std::string("malformed generator reply: ") + e.what());
  }
}

}  // namespace ehr::ai
