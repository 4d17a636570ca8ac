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

#include "ehr/security/pipeline.hpp"

#include <algorithm>

namespace ehr::security {

using identity::Role;

std::string_view to_string(Layer layer) noexcept {
  switch (layer) {
    case Layer::authentication: return "authentication";
    case Layer::authorization: return "authorization";
    case Layer::validation: return "validation";
    case Layer::access_control: return "access_control";
    case Layer::audit: return "audit";
  }
  return "audit";
}

nlohmann::json PipelineFailure::to_json() const {
  nlohmann::json j = {{"error_kind", ehr::to_string(kind)},
                      {"layer", layer ? nlohmann::json(to_string(*layer)) : nlohmann::json()},
                      {"detail", detail}};
  if (!field_paths.empty()) j["fields"] = field_paths;
  return j;
}

int PipelineResult::http_status() const {
  if (!failure) return 200;
  return ehr::http_status(failure->kind);
}

SecurityPipeline::SecurityPipeline(const identity::IdentityService& identity,
                                   const SchemaRegistry& schemas, AdmissionCheck admissions,
                                   audit::AuditLog& audit, const Clock& clock)
    : identity_(identity),
      schemas_(schemas),
      admissions_(std::move(admissions)),
      audit_(audit),
      clock_(clock) {}

RequestContext SecurityPipeline::authenticate_layer(RequestContext ctx) const {
  if (ctx.raw_token.empty()) throw Error(ErrorKind::unauthorized, "Unauthorized");
  try {
    ctx.claims = identity_.validate_token(ctx.raw_token);
  } catch (const Error&) {
    // Signature, expiry and audience failures look the same to the caller.
    throw Error(ErrorKind::unauthorized, "Unauthorized");
  }
  return ctx;
}

void SecurityPipeline::authorize_layer(const RequestContext& ctx,
                                       std::string_view required_permission) const {
  if (!ctx.claims || !ctx.claims->has_permission(required_permission)) {
    throw Error(ErrorKind::forbidden, "Forbidden: Insufficient permissions");
  }
}

void SecurityPipeline::authorize_layer(const RequestContext& ctx, const OperationSpec& op) const {
  if (!ctx.claims) throw Error(ErrorKind::forbidden, "Forbidden: Insufficient permissions");
  const auto& c = *ctx.claims;
  const bool granted =
      c.is_service()
          ? !op.service_scope.empty() && c.has_scope(op.service_scope)
          : std::any_of(op.permissions.begin(), op.permissions.end(),
                        [&](const std::string& p) { return c.has_permission(p); });
  if (!granted) throw Error(ErrorKind::forbidden, "Forbidden: Insufficient permissions");
}

void SecurityPipeline::validate_layer(const RequestContext& ctx, std::string_view schema_id) const {
  auto errors = schemas_.validate(schema_id, ctx.payload, clock_.now());
  if (errors.empty()) return;
  std::string detail = "validation failed:";
  std::vector<std::string> paths;
  for (const auto& e : errors) {
    detail += " " + e.path + ": " + e.message + ";";
    paths.push_back(e.path);
  }
  detail.pop_back();
  throw Error(ErrorKind::validation_error, detail, std::move(paths));
}

void SecurityPipeline::access_control_layer(const RequestContext& ctx,
                                            const OperationSpec& op) const {
  if (!ctx.claims) throw Error(ErrorKind::access_denied, "access denied");
  const auto& c = *ctx.claims;
  if (!ctx.target_patient) throw Error(ErrorKind::access_denied, "no target patient");
  const auto& target = *ctx.target_patient;

  bool allowed = false;
  if (c.is_service()) {
    allowed = !op.service_scope.empty() && c.has_scope(op.service_scope);
  } else if (c.has_role(Role::doctor)) {
    allowed = admissions_ && admissions_(c.subject, target);
  } else if (c.has_role(Role::patient)) {
    allowed = target == c.subject;
  }
  if (!allowed) {
    throw Error(ErrorKind::access_denied,
                "access denied: no active relationship with this patient");
  }
}

PipelineResult SecurityPipeline::process_request(RequestContext ctx, const OperationSpec& op,
                                                 const Handler& handler) {
  PipelineResult result;
  auto pass = [&](Layer l) {
    LayerOutcome o{l, LayerVerdict::pass, std::nullopt};
    result.trace.push_back(o);
    if (observer_) observer_(o);
  };
  auto fail = [&](std::optional<Layer> l, const Error& e) {
    if (l) {
      LayerOutcome o{*l, LayerVerdict::fail, e.kind()};
      result.trace.push_back(o);
      if (observer_) observer_(o);
    }
    result.failure = PipelineFailure{e.kind(), l, e.what(), e.field_paths()};
  };
  ctx.operation = op.name;

  std::optional<HandlerResult> handled;
  [&] {
    try {
      ctx = authenticate_layer(ctx);
    } catch (const Error& e) {
      return fail(Layer::authentication, e);
    }
    pass(Layer::authentication);
    try {
      authorize_layer(ctx, op);
    } catch (const Error& e) {
      return fail(Layer::authorization, e);
    }
    pass(Layer::authorization);
    try {
      validate_layer(ctx, op.schema);
    } catch (const Error& e) {
      return fail(Layer::validation, e);
    }
    pass(Layer::validation);
    try {
      access_control_layer(ctx, op);
    } catch (const Error& e) {
      return fail(Layer::access_control, e);
    }
    pass(Layer::access_control);
    try {
      handled = handler(ctx);
    } catch (const Error& e) {
      return fail(std::nullopt, e);
    }
  }();

  audit::AuditEntry entry;
  entry.collection_name = op.collection;
  entry.document_id = handled && !handled->document_id.empty()
                          ? handled->document_id
                          : ctx.target_patient.value_or("");
  entry.action = op.action;
  entry.actor_id = ctx.claims ? ctx.claims->subject : "anonymous";
  entry.ip_address = ctx.source_ip;
  entry.user_agent = ctx.user_agent;
  entry.reason = op.reason;
  entry.access_type = audit::AccessType::Regular;
  entry.status = result.failure ? audit::Status::Failure : audit::Status::Success;
  if (result.failure) {
    entry.layer = result.failure->layer ? std::string(to_string(*result.failure->layer))
                                        : std::string("handler");
    entry.error_kind = std::string(ehr::to_string(result.failure->kind));
  }

  try {
    result.audit_entry_id = audit_.append(std::move(entry));
  } catch (const std::exception& e) {
    // Audit is mandatory: a request whose entry cannot be stored fails.
    if (!result.failure) {
      result.trace.push_back({Layer::audit, LayerVerdict::fail, ErrorKind::internal});
      if (observer_) observer_(result.trace.back());
      result.failure = PipelineFailure{ErrorKind::internal, Layer::audit,
                                       "audit storage unavailable", {}};
    }
    result.body.reset();
    return result;
  }
  if (!result.failure) {
    pass(Layer::audit);
    result.body = std::move(handled->body);
  }
  return result;
}

}  // namespace ehr::security
