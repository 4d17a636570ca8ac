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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ehr/audit/audit_log.hpp"
#include "ehr/core/error.hpp"
#include "ehr/identity/identity_service.hpp"
#include "ehr/security/schema.hpp"

namespace ehr::security {

enum class Layer { authentication, authorization, validation, access_control, audit };
enum class LayerVerdict { pass, fail };

std::string_view to_string(Layer layer) noexcept;

struct LayerOutcome {
  Layer layer;
  LayerVerdict verdict;
  std::optional<ErrorKind> error_kind;
};

struct RequestContext {
  std::string raw_token;
  std::optional<identity::PrincipalClaims> claims;  // set by authentication
  std::string operation;
  nlohmann::json payload;
  std::optional<std::string> target_patient;
  std::string source_ip;
  std::string user_agent;
};

// Static description of one protected operation.
struct OperationSpec {
  std::string name;
  // Any one of these user permissions authorizes the call.
  std::vector<std::string> permissions;
  // Scope a service principal needs; empty means services may not call it.
  std::string service_scope;
  std::string schema = "empty";
  audit::Action action = audit::Action::VIEW;
  std::string collection;
  std::string reason;
};

struct HandlerResult {
  nlohmann::json body;
  std::string document_id;  // audited document; defaults to the target patient
};

using Handler = std::function<HandlerResult(const RequestContext&)>;

struct PipelineFailure {
  ErrorKind kind;
  std::optional<Layer> layer;  // empty when the handler itself failed
  std::string detail;
  std::vector<std::string> field_paths;

  // {error_kind, layer, detail[, fields]}
  nlohmann::json to_json() const;
};

struct PipelineResult {
  std::vector<LayerOutcome> trace;
  std::optional<nlohmann::json> body;
  std::optional<PipelineFailure> failure;
  std::string audit_entry_id;

  bool ok() const { return !failure.has_value(); }
  int http_status() const;
};

// Relationship checks consulted by the access-control layer.
using AdmissionCheck =
    std::function<bool(std::string_view doctor_id, std::string_view patient_id)>;

// Five ordered layers: authentication, authorization, validation, access
// control, audit. The first failing layer ends the request; the handler runs
// only after access control passes. Exactly one audit entry is written per
// processed request, on success and on failure.
class SecurityPipeline {
 public:
  SecurityPipeline(const identity::IdentityService& identity, const SchemaRegistry& schemas,
                   AdmissionCheck admissions, audit::AuditLog& audit, const Clock& clock);

  // Each layer throws Error with its error kind on failure.
  RequestContext authenticate_layer(RequestContext ctx) const;
  void authorize_layer(const RequestContext& ctx, std::string_view required_permission) const;
  void authorize_layer(const RequestContext& ctx, const OperationSpec& op) const;
  void validate_layer(const RequestContext& ctx, std::string_view schema_id) const;
  void access_control_layer(const RequestContext& ctx, const OperationSpec& op) const;

  PipelineResult process_request(RequestContext ctx, const OperationSpec& op,
                                 const Handler& handler);

  // Test hook: invoked as each layer completes.
  void set_layer_observer(std::function<void(const LayerOutcome&)> observer) {
    observer_ = std::move(observer);
  }

 private:
  const identity::IdentityService& identity_;
  const SchemaRegistry& schemas_;
  AdmissionCheck admissions_;
  audit::AuditLog& audit_;
  const Clock& clock_;
  std::function<void(const LayerOutcome&)> observer_;
};

}  // namespace ehr::security
