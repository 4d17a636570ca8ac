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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ehr/core/clock.hpp"
#include "ehr/gateway/http.hpp"
#include "ehr/gateway/rate_limiter.hpp"
#include "ehr/gateway/ttl_cache.hpp"
#include "ehr/identity/identity_service.hpp"

namespace ehr::gateway {

enum class Service { directory, records, ai, audit, identity };

std::string_view to_string(Service s) noexcept;

// Pure path-prefix routing. Prefixes match whole segments only, so "/chats/"
// and "/chat/x" resolve independently.
std::optional<Service> route_for(std::string_view path) noexcept;

struct AccessLogLine {
  std::string method;
  std::string path;
  int status = 0;
  double latency_ms = 0;
  std::string client_ip;
};

using AccessLogSink = std::function<void(const AccessLogLine&)>;

nlohmann::json to_json(const AccessLogLine& line);

struct GatewayOptions {
  // Peers whose X-Forwarded-For header is believed.
  std::set<std::string> trusted_proxies;
  // Upstream attempts for one request: the first call plus at most one retry.
  int max_attempts = 2;
};

// Single entry point: rate limits, then routes by prefix to the mounted
// service. The Authorization header is passed through untouched.
class Gateway {
 public:
  Gateway(const Clock& clock, const identity::IdentityService& identity, RateLimiter& limiter,
          TtlCache& cache, GatewayOptions options = {});

  void mount(Service service, Upstream upstream);
  void set_access_log(AccessLogSink sink) { access_log_ = std::move(sink); }

  HttpResponse handle(const HttpRequest& request);

  std::string client_ip(const HttpRequest& request) const;
  // Subject of a valid bearer token, remembered under session:<digest>.
  std::optional<std::string> principal_of(const HttpRequest& request);

 private:
  HttpResponse dispatch(const HttpRequest& request);

  const Clock& clock_;
  const identity::IdentityService& identity_;
  RateLimiter& limiter_;
  TtlCache& cache_;
  GatewayOptions options_;
  std::map<Service, Upstream> upstreams_;
  AccessLogSink access_log_;
};

}  // namespace ehr::gateway
