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

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "ehr/core/clock.hpp"

namespace ehr::gateway {

struct RateLimits {
  std::uint32_t per_ip = 1000;   // requests per window per client address
  std::uint32_t per_user = 100;  // requests per window per authenticated principal
  std::int64_t window_seconds = 60;
};

struct RateWindow {
  std::string key;
  std::int64_t window_start = 0;  // unix seconds
  std::uint32_t count = 0;
};

struct RateDecision {
  bool allowed = true;
  std::int64_t retry_after_seconds = 0;
  std::string limited_by;  // "ip" or "user" when denied
};

// Fixed windows keyed by floor(now / window). A request is admitted only when
// both its address and (if known) its principal are below their limits, and
// only admitted requests are counted.
class RateLimiter {
 public:
  explicit RateLimiter(RateLimits limits = {}) : limits_(limits) {}

  RateDecision check(std::string_view ip, const std::optional<std::string>& principal,
                     Timestamp now);

  std::optional<RateWindow> window(std::string_view key, Timestamp now) const;
  const RateLimits& limits() const { return limits_; }

 private:
  std::int64_t window_of(Timestamp now) const;

  RateLimits limits_;
  mutable std::mutex mu_;
  std::map<std::string, RateWindow, std::less<>> windows_;
  std::int64_t last_pruned_ = 0;
};

}  // namespace ehr::gateway
