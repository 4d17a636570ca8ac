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

#include "ehr/audit/audit_log.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>

#include "ehr/core/crypto.hpp"
#include "ehr/core/error.hpp"
#include "ehr/core/time_format.hpp"

namespace ehr::audit {

std::string_view to_string(Action a) noexcept {
  switch (a) {
    case Action::VIEW: return "VIEW";
    case Action::CREATE: return "CREATE";
    case Action::UPDATE: return "UPDATE";
    case Action::DELETE: return "DELETE";
  }
  return "VIEW";
}

std::string_view to_string(AccessType a) noexcept {
  return a == AccessType::Regular ? "Regular" : "Emergency";
}

std::string_view to_string(Status s) noexcept {
  return s == Status::Success ? "Success" : "Failure";
}

Action parse_action(std::string_view name) {
  if (name == "VIEW") return Action::VIEW;
  if (name == "CREATE") return Action::CREATE;
  if (name == "UPDATE") return Action::UPDATE;
  if (name == "DELETE") return Action::DELETE;
  throw Error(ErrorKind::validation_error, "unknown audit action: " + std::string(name),
              {"action"});
}

AccessType parse_access_type(std::string_view name) {
  if (name == "Regular") return AccessType::Regular;
  if (name == "Emergency") return AccessType::Emergency;
  throw Error(ErrorKind::validation_error, "unknown access type", {"access_type"});
}

Status parse_status(std::string_view name) {
  if (name == "Success") return Status::Success;
  if (name == "Failure") return Status::Failure;
  throw Error(ErrorKind::validation_error, "unknown status", {"status"});
}

nlohmann::json to_json(const AuditEntry& e) {
  nlohmann::json j = {
      {"_id", e.entry_id},
      {"sequence", e.sequence},
      {"collection_name", e.collection_name},
      {"document_id", e.document_id},
      {"action", to_string(e.action)},
      {"actor_id", e.actor_id},
      {"ip_address", e.ip_address},
      {"user_agent", e.user_agent},
      {"reason", e.reason},
      {"access_type", to_string(e.access_type)},
      {"status", to_string(e.status)},
      {"createdAt", format_iso8601(e.created_at)},
      {"updatedAt", format_iso8601(e.updated_at)},
      {"version", e.version},
  };
  if (!e.layer.empty()) j["layer"] = e.layer;
  if (!e.error_kind.empty()) j["error_kind"] = e.error_kind;
  return j;
}

AuditEntry entry_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::validation_error, "audit entry must be a document");
  AuditEntry e;
  try {
    e.entry_id = j.value("_id", std::string{});
    e.sequence = j.value("sequence", std::uint64_t{0});
    e.collection_name = j.at("collection_name").get<std::string>();
    e.document_id = j.at("document_id").get<std::string>();
    e.action = parse_action(j.at("action").get<std::string>());
    e.actor_id = j.at("actor_id").get<std::string>();
    e.ip_address = j.value("ip_address", std::string{});
    e.user_agent = j.value("user_agent", std::string{});
    e.reason = j.value("reason", std::string{});
    e.access_type = parse_access_type(j.value("access_type", std::string{"Regular"}));
    e.status = parse_status(j.value("status", std::string{"Success"}));
    if (j.contains("createdAt")) {
      auto t = parse_iso8601(j.at("createdAt").get<std::string>());
      if (!t) throw Error(ErrorKind::validation_error, "bad createdAt", {"createdAt"});
      e.created_at = *t;
    }
    if (j.contains("updatedAt")) {
      auto t = parse_iso8601(j.at("updatedAt").get<std::string>());
      if (!t) throw Error(ErrorKind::validation_error, "bad updatedAt", {"updatedAt"});
      e.updated_at = *t;
    }
    e.version = j.value("version", 0);
    e.layer = j.value("layer", std::string{});
    e.error_kind = j.value("error_kind", std::string{});
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::validation_error, std::string("malformed audit entry: ") + ex.what());
  }
  return e;
}

NdjsonAuditStorage::NdjsonAuditStorage(std::string path) : path_(std::move(path)) {}

void NdjsonAuditStorage::persist(const AuditEntry& entry) {
  std::ofstream out(path_, std::ios::app);
  out << to_json(entry).dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorKind::internal, "audit storage write failed");
}

std::vector<AuditEntry> NdjsonAuditStorage::load() {
  std::vector<AuditEntry> out;
  std::ifstream in(path_);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    out.push_back(entry_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

AuditLog::AuditLog(const Clock& clock, std::unique_ptr<AuditStorage> storage,
                   int retention_years)
    : clock_(clock), storage_(std::move(storage)), retention_years_(retention_years) {
  if (retention_years_ <= 0) throw Error(ErrorKind::internal, "retention must be positive");
  entries_ = storage_->load();
}

std::string AuditLog::append(AuditEntry entry) {
  if (entry.collection_name.empty() || entry.actor_id.empty()) {
    throw Error(ErrorKind::validation_error, "audit entry requires collection and actor");
  }
  std::unique_lock lock(mu_);
  entry.sequence = entries_.empty() ? 1 : entries_.back().sequence + 1;
  char id[32];
  std::snprintf(id, sizeof id, "audit-%012llu",
                static_cast<unsigned long long>(entry.sequence));
  entry.entry_id = id;
  entry.created_at = clock_.now();
  entry.updated_at = entry.created_at;
  entry.version = 0;
  storage_->persist(entry);
  entries_.push_back(std::move(entry));
  return entries_.back().entry_id;
}

std::string AuditLog::append(const nlohmann::json& document) {
  return append(entry_from_json(document));
}

std::vector<AuditEntry> AuditLog::query(const identity::PrincipalClaims& caller,
                                        const AuditQuery& f, Page page) const {
  const bool allowed = caller.has_role(identity::Role::admin) ||
                       (caller.is_service() && caller.has_scope(identity::scope::kAuditRead));
  if (!allowed) throw Error(ErrorKind::forbidden, "audit trail is restricted to administrators");

  std::shared_lock lock(mu_);
  std::vector<AuditEntry> out;
  std::size_t skipped = 0;
  for (const auto& e : entries_) {
    if (f.actor_id && e.actor_id != *f.actor_id) continue;
    if (f.document_id && e.document_id != *f.document_id) continue;
    if (f.action && e.action != *f.action) continue;
    if (f.from && e.created_at < *f.from) continue;
    if (f.to && e.created_at >= *f.to) continue;
    if (skipped < page.offset) {
      ++skipped;
      continue;
    }
    if (out.size() >= page.limit) break;
    out.push_back(e);
  }
  return out;
}

std::vector<AuditEntry> AuditLog::retention_check(Timestamp now) const {
  using namespace std::chrono;
  const auto day = floor<days>(now);
  year_month_day ymd{day};
  year_month_day shifted = ymd - years{retention_years_};
  if (!shifted.ok()) shifted = shifted.year() / shifted.month() / last;  // Feb 29
  const Timestamp horizon = Timestamp{sys_days{shifted}.time_since_epoch()} + (now - day);

  std::shared_lock lock(mu_);
  std::vector<AuditEntry> out;
  for (const auto& e : entries_) {
    if (e.created_at < horizon) out.push_back(e);
  }
  return out;
}

std::size_t AuditLog::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

std::vector<AuditEntry> AuditLog::snapshot() const {
  std::shared_lock lock(mu_);
  return entries_;
}

std::string AuditLog::stream_hash(std::optional<std::size_t> prefix) const {
  std::shared_lock lock(mu_);
  const std::size_t n = std::min(prefix.value_or(entries_.size()), entries_.size());
  std::string chain(32, '\0');
  for (std::size_t i = 0; i < n; ++i) {
    chain = crypto::sha256(chain + to_json(entries_[i]).dump());
  }
  return crypto::to_hex(chain);
}

void AuditLog::export_ndjson(std::ostream& out) const {
  std::shared_lock lock(mu_);
  for (const auto& e : entries_) out << to_json(e).dump() << '\n';
}

}  // namespace ehr::audit
