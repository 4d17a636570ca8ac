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

#include "ehr/gateway/ttl_cache.hpp"

#include "ehr/core/error.hpp"

namespace ehr::gateway {

std::chrono::seconds TtlCache::default_ttl(std::string_view key) const {
  if (key.rfind("session:", 0) == 0) return ttls_.session;
  if (key.rfind("query:", 0) == 0) return ttls_.query;
  if (key.rfind("ai:", 0) == 0) return ttls_.ai;
  throw Error(ErrorKind::validation_error,
              "cache key must be namespaced (session:, query:, ai:): " + std::string(key));
}

std::optional<std::string> TtlCache::get(std::string_view key) const {
  const auto now = clock_.now();
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (now >= it->second.inserted_at + it->second.ttl) return std::nullopt;
  return it->second.value;
}

void TtlCache::put(std::string_view key, std::string value,
                   std::optional<std::chrono::seconds> ttl) {
  const auto d = default_ttl(key);
  CacheEntry e{std::string(key), std::move(value), ttl.value_or(d), clock_.now()};
  std::lock_guard lock(mu_);
  // Expired entries are dropped lazily here to bound growth.
  for (auto it = entries_.begin(); it != entries_.end();) {
    it = e.inserted_at >= it->second.inserted_at + it->second.ttl ? entries_.erase(it)
                                                                  : std::next(it);
  }
  entries_.insert_or_assign(e.key, std::move(e));
}

void TtlCache::invalidate(std::string_view key) {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it != entries_.end()) entries_.erase(it);
}

std::size_t TtlCache::invalidate_prefix(std::string_view prefix) {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (auto it = entries_.lower_bound(prefix);
       it != entries_.end() && it->first.compare(0, prefix.size(), prefix) == 0;) {
    it = entries_.erase(it);
    ++n;
  }
  return n;
}

void TtlCache::invalidate_patient(std::string_view patient_id) {
  invalidate("ai:sum:" + std::string(patient_id));
  invalidate_prefix("query:" + std::string(patient_id) + ":");
}

std::size_t TtlCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace ehr::gateway
