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

#include "ehr/gateway/rate_limiter.hpp"

namespace ehr::gateway {

std::int64_t RateLimiter::window_of(Timestamp now) const {
  const auto s = unix_seconds(now);
  auto w = s / limits_.window_seconds;
  if (s < 0 && s % limits_.window_seconds != 0) --w;
  return w * limits_.window_seconds;
}

RateDecision RateLimiter::check(std::string_view ip, const std::optional<std::string>& principal,
                                Timestamp now) {
  const auto start = window_of(now);
  const auto retry_after = start + limits_.window_seconds - unix_seconds(now);
  const std::string ip_key = "ip:" + std::string(ip);
  const std::string user_key = principal ? "user:" + *principal : std::string();

  std::lock_guard lock(mu_);
  if (start != last_pruned_) {
    for (auto it = windows_.begin(); it != windows_.end();) {
      it = it->second.window_start < start ? windows_.erase(it) : std::next(it);
    }
    last_pruned_ = start;
  }

  auto current = [&](const std::string& key) -> RateWindow& {
    auto& w = windows_[key];
    if (w.window_start != start || w.key.empty()) w = RateWindow{key, start, 0};
    return w;
  };

  RateWindow& ip_w = current(ip_key);
  if (ip_w.count >= limits_.per_ip) return {false, retry_after, "ip"};
  RateWindow* user_w = nullptr;
  if (principal) {
    user_w = &current(user_key);
    if (user_w->count >= limits_.per_user) return {false, retry_after, "user"};
  }
  ++ip_w.count;
  if (user_w) ++user_w->count;
  return {};
}

std::optional<RateWindow> RateLimiter::window(std::string_view key, Timestamp now) const {
  std::lock_guard lock(mu_);
  auto it = windows_.find(key);
  if (it == windows_.end() || it->second.window_start != window_of(now)) return std::nullopt;
  return it->second;
}

}  // namespace ehr::gateway
