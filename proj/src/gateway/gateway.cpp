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

#include "ehr/gateway/gateway.hpp"

#include <array>
#include <chrono>
#include <utility>

#include "ehr/core/crypto.hpp"

namespace ehr::gateway {
namespace {

constexpr std::array<std::pair<std::string_view, Service>, 13> kRoutes = {{
    {"/api/user", Service::directory},
    {"/api/admissions", Service::directory},
    {"/api/patients", Service::directory},
    {"/api/doctors", Service::directory},
    {"/api/requests", Service::directory},
    {"/api/hospitals", Service::directory},
    {"/api/contacts", Service::directory},
    {"/api/records", Service::records},
    {"/api/ai", Service::ai},
    {"/chat", Service::ai},
    {"/chats", Service::ai},
    {"/api/audit", Service::audit},
    {"/auth", Service::identity},
}};

bool segment_prefix(std::string_view path, std::string_view prefix) {
  if (path.substr(0, prefix.size()) != prefix) return false;
  return path.size() == prefix.size() || path[prefix.size()] == '/';
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view to_string(Service s) noexcept {
  switch (s) {
    case Service::directory: return "user-directory";
    case Service::records: return "patient-records";
    case Service::ai: return "ai-orchestrator";
    case Service::audit: return "audit-log";
    case Service::identity: return "identity-access";
  }
  return "user-directory";
}

std::optional<Service> route_for(std::string_view path) noexcept {
  for (const auto& [prefix, service] : kRoutes) {
    if (segment_prefix(path, prefix)) return service;
  }
  return std::nullopt;
}

nlohmann::json to_json(const AccessLogLine& line) {
  return {{"method", line.method},
          {"path", line.path},
          {"status", line.status},
          {"latency_ms", line.latency_ms},
          {"client_ip", line.client_ip}};
}

Gateway::Gateway(const Clock& clock, const identity::IdentityService& identity,
                 RateLimiter& limiter, TtlCache& cache, GatewayOptions options)
    : clock_(clock),
      identity_(identity),
      limiter_(limiter),
      cache_(cache),
      options_(std::move(options)) {}

void Gateway::mount(Service service, Upstream upstream) {
  upstreams_[service] = std::move(upstream);
}

std::string Gateway::client_ip(const HttpRequest& request) const {
  if (options_.trusted_proxies.count(request.remote_ip)) {
    if (auto xff = request.header("X-Forwarded-For")) {
      // Left-most entry is the original client.
      auto first = trim(std::string_view(*xff).substr(0, xff->find(',')));
      if (!first.empty()) return first;
    }
  }
  return request.remote_ip;
}

std::optional<std::string> Gateway::principal_of(const HttpRequest& request) {
  const auto token = request.bearer_token();
  if (token.empty()) return std::nullopt;
  const auto key = "session:" + crypto::to_hex(crypto::sha256(token));
  if (auto subject = cache_.get(key)) return subject;
  try {
    auto claims = identity_.validate_token(token);
    const auto remaining = std::chrono::seconds(claims.expires_at - unix_seconds(clock_.now()));
    auto ttl = std::min<std::chrono::seconds>(remaining, std::chrono::seconds(30 * 60));
    if (ttl.count() > 0) cache_.put(key, claims.subject, ttl);
    return claims.subject;
  } catch (const Error&) {
    // Invalid tokens are rate limited by address only; the service rejects them.
    return std::nullopt;
  }
}

HttpResponse Gateway::dispatch(const HttpRequest& request) {
  const auto service = route_for(request.path);
  if (!service) return HttpResponse::error(ErrorKind::not_found, "no route for " + request.path);
  auto it = upstreams_.find(*service);
  if (it == upstreams_.end()) {
    return HttpResponse::error(ErrorKind::bad_gateway,
                               std::string(to_string(*service)) + " is not available");
  }
  const int attempts = std::max(1, options_.max_attempts);
  for (int i = 0; i < attempts; ++i) {
    try {
      return it->second(request);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::upstream_error && e.kind() != ErrorKind::bad_gateway) {
        return HttpResponse::error(e);
      }
    } catch (const std::exception&) {
      // Treated as an unreachable upstream.
    }
  }
  return HttpResponse::error(ErrorKind::bad_gateway,
                             std::string(to_string(*service)) + " is unreachable");
}

HttpResponse Gateway::handle(const HttpRequest& request) {
  const auto started = std::chrono::steady_clock::now();
  const auto ip = client_ip(request);
  const auto principal = principal_of(request);

  HttpResponse response;
  const auto decision = limiter_.check(ip, principal, clock_.now());
  if (!decision.allowed) {
    response = HttpResponse::error(ErrorKind::rate_limited,
                                   "rate limit exceeded (" + decision.limited_by + ")");
    response.headers["Retry-After"] = std::to_string(decision.retry_after_seconds);
  } else {
    response = dispatch(request);
  }

  if (access_log_) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    access_log_({request.method, request.path, response.status,
                 std::chrono::duration<double, std::milli>(elapsed).count(), ip});
  }
  return response;
}

}  // namespace ehr::gateway
