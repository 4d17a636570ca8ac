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
#include <iosfwd>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ehr/core/clock.hpp"
#include "ehr/identity/claims.hpp"

namespace ehr::audit {

enum class Action { VIEW, CREATE, UPDATE, DELETE };
enum class AccessType { Regular, Emergency };
enum class Status { Success, Failure };

std::string_view to_string(Action a) noexcept;
std::string_view to_string(AccessType a) noexcept;
std::string_view to_string(Status s) noexcept;
// Throw Error(validation_error) on names outside the closed enumerations.
Action parse_action(std::string_view name);
AccessType parse_access_type(std::string_view name);
Status parse_status(std::string_view name);

struct AuditEntry {
  std::string entry_id;
  std::uint64_t sequence = 0;
  std::string collection_name;
  std::string document_id;
  Action action = Action::VIEW;
  std::string actor_id;
  std::string ip_address;
  std::string user_agent;
  std::string reason;
  AccessType access_type = AccessType::Regular;
  Status status = Status::Success;
  Timestamp created_at{};
  Timestamp updated_at{};
  int version = 0;
  // Failure context from the request pipeline; empty on success.
  std::string layer;
  std::string error_kind;

  bool operator==(const AuditEntry&) const = default;
};

// Document shape: "_id", collection_name, document_id, action, actor_id,
// ip_address, user_agent, reason, access_type, status, createdAt, updatedAt,
// version, sequence (+ layer/error_kind on failures).
nlohmann::json to_json(const AuditEntry& e);
AuditEntry entry_from_json(const nlohmann::json& j);

// Durable backing for the stream. persist() must not return before the entry
// is durable; a throw fails the request that produced the entry.
class AuditStorage {
 public:
  virtual ~AuditStorage() = default;
  virtual void persist(const AuditEntry& entry) = 0;
  virtual std::vector<AuditEntry> load() { return {}; }
};

class MemoryAuditStorage final : public AuditStorage {
 public:
  void persist(const AuditEntry&) override {}
};

// Newline-delimited documents, one entry per line, flushed per append.
class NdjsonAuditStorage final : public AuditStorage {
 public:
  explicit NdjsonAuditStorage(std::string path);
  void persist(const AuditEntry& entry) override;
  std::vector<AuditEntry> load() override;

 private:
  std::string path_;
};

struct AuditQuery {
  std::optional<std::string> actor_id;
  std::optional<std::string> document_id;
  std::optional<Action> action;
  std::optional<Timestamp> from;  // inclusive
  std::optional<Timestamp> to;    // exclusive
};

struct Page {
  std::size_t offset = 0;
  std::size_t limit = 100;
};

// Append-only trail. There is deliberately no update or delete member.
class AuditLog {
 public:
  explicit AuditLog(const Clock& clock,
                    std::unique_ptr<AuditStorage> storage = std::make_unique<MemoryAuditStorage>(),
                    int retention_years = 5);

  // Assigns entry_id, sequence, timestamps and version; returns the entry id.
  std::string append(AuditEntry entry);
  // Document form; enumerations are validated.
  std::string append(const nlohmann::json& document);

  // Admins, or service principals holding audit:read. Ordered by sequence.
  std::vector<AuditEntry> query(const identity::PrincipalClaims& caller,
                                const AuditQuery& filter, Page page = {}) const;

  // Entries strictly older than now minus the retention horizon (calendar
  // years). Advisory only: nothing is removed.
  std::vector<AuditEntry> retention_check(Timestamp now) const;

  std::size_t size() const;
  std::vector<AuditEntry> snapshot() const;
  // Hex SHA-256 chain over the first `prefix` entries (all when omitted).
  std::string stream_hash(std::optional<std::size_t> prefix = std::nullopt) const;
  void export_ndjson(std::ostream& out) const;

  int retention_years() const { return retention_years_; }

 private:
  const Clock& clock_;
  std::unique_ptr<AuditStorage> storage_;
  int retention_years_;
  mutable std::shared_mutex mu_;
  std::vector<AuditEntry> entries_;
};

}  // namespace ehr::audit
