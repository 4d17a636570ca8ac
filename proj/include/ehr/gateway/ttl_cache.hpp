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

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "ehr/core/clock.hpp"

namespace ehr::gateway {

struct CacheTtls {
  std::chrono::seconds session{30 * 60};
  std::chrono::seconds query{60};
  std::chrono::seconds ai{300};
};

struct CacheEntry {
  std::string key;
  std::string value;
  std::chrono::seconds ttl{0};
  Timestamp inserted_at{};
};

// Namespaced key/value cache. Keys must start with "session:", "query:" or
// "ai:"; an entry is never returned at or after inserted_at + ttl.
class TtlCache {
 public:
  explicit TtlCache(const Clock& clock, CacheTtls ttls = {}) : clock_(clock), ttls_(ttls) {}

  std::optional<std::string> get(std::string_view key) const;
  // ttl defaults to the namespace's configured value.
  void put(std::string_view key, std::string value,
           std::optional<std::chrono::seconds> ttl = std::nullopt);
  void invalidate(std::string_view key);
  // Removes every key starting with `prefix`; returns how many went.
  std::size_t invalidate_prefix(std::string_view prefix);
  // Both invalidations a record mutation implies for one patient.
  void invalidate_patient(std::string_view patient_id);

  std::size_t size() const;

 private:
  std::chrono::seconds default_ttl(std::string_view key) const;

  const Clock& clock_;
  CacheTtls ttls_;
  mutable std::mutex mu_;
  std::map<std::string, CacheEntry, std::less<>> entries_;
};

}  // namespace ehr::gateway
