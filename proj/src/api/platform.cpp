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

#include "ehr/api/platform.hpp"

#include <sstream>

#include "ehr/core/error.hpp"
#include "ehr/core/time_format.hpp"
#include "ehr/security/schema.hpp"

namespace ehr::api {
namespace {

using gateway::HttpRequest;
using gateway::HttpResponse;
using nlohmann::json;

std::vector<std::string> segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= path.size()) {
    auto end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    if (end > start) out.emplace_back(path.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

json parse_body(const HttpRequest& request) {
  if (request.body.empty()) return json::object();
  auto j = json::parse(request.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorKind::validation_error, "body must be a JSON object");
  }
  return j;
}

std::string field(const json& body, const char* name, bool required = true) {
  auto it = body.find(name);
  if (it == body.end() || it->is_null()) {
    if (required) throw Error(ErrorKind::validation_error, std::string(name) + " is required", {name});
    return {};
  }
  if (!it->is_string()) {
    throw Error(ErrorKind::validation_error, std::string(name) + " must be a string", {name});
  }
  return it->get<std::string>();
}

std::optional<std::string> query(const HttpRequest& request, const char* name) {
  auto it = request.query.find(name);
  if (it == request.query.end()) return std::nullopt;
  return it->second;
}

HttpResponse from_pipeline(const security::PipelineResult& result, int success_status = 200) {
  if (!result.ok()) return HttpResponse::json(result.http_status(), result.failure->to_json());
  return HttpResponse::json(success_status, result.body.value_or(json::object()));
}

HttpResponse method_not_allowed(const HttpRequest& request) {
  return HttpResponse::error(ErrorKind::not_found,
                             "no handler for " + request.method + " " + request.path);
}

template <class T>
json to_array(const std::vector<T>& items) {
  json out = json::array();
  for (const auto& item : items) out.push_back(directory::to_json(item));
  return out;
}

std::size_t parse_size(const std::optional<std::string>& text, std::size_t fallback,
                       const char* name) {
  if (!text) return fallback;
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(*text, &pos);
    if (pos != text->size()) throw std::invalid_argument(name);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw Error(ErrorKind::validation_error, std::string(name) + " must be a number", {name});
  }
}

}  // namespace

Platform::Platform(const Clock& clock, IdGenerator& ids, PlatformOptions options)
    : clock_(clock),
      ids_(ids),
      options_(std::move(options)),
      directory_(clock, ids),
      identity_(identity::IdentityConfig{options_.signing_key}, clock,
                [this](std::string_view id) { return directory_.role_of(id); }),
      audit_(clock, options_.audit_path.empty()
                        ? std::unique_ptr<audit::AuditStorage>(
                              std::make_unique<audit::MemoryAuditStorage>())
                        : std::make_unique<audit::NdjsonAuditStorage>(options_.audit_path)),
      pipeline_(identity_, security::SchemaRegistry::builtin(),
                [this](std::string_view doctor, std::string_view patient) {
                  return directory_.has_active_admission(doctor, patient);
                },
                audit_, clock),
      blobs_(ids),
      records_(
          pipeline_, audit_, clock, ids,
          [this](std::string_view id) { return directory_.patient(id).has_value(); },
          [this](std::string_view id) {
            auto d = directory_.doctor(id);
            return d ? d->name : std::string(id);
          }),
      cache_(clock, options_.cache_ttls),
      limiter_(options_.rate_limits),
      gateway_(clock, identity_, limiter_, cache_, options_.gateway) {
  if (options_.generator) {
    generator_ = std::make_unique<ai::HttpGeneratorClient>(*options_.generator);
  } else {
    auto mock = std::make_unique<ai::MockGenerator>();
    mock_generator_ = mock.get();
    generator_ = std::move(mock);
  }

  identity_.register_service(
      {options_.ai_client_id, options_.ai_client_secret, {"record:read", "report:write"}});

  directory_.set_approval_sink(
      [this](const directory::DataAdditionRequest& r, const std::string& doctor_id) {
        records_.import_approved({r.patient_id, doctor_id, std::string(to_string(r.data_type)),
                                  format_date(r.issuance_date), r.document_ref, r.description});
      });

  orchestrator_ = std::make_unique<ai::AiOrchestrator>(ai::OrchestratorDeps{
      pipeline_,
      records_,
      identity_,
      *generator_,
      classifier_,
      blobs_,
      cache_,
      clock,
      ids,
      ai::Prompts::builtin(),
      {options_.ai_client_id, options_.ai_client_secret},
      [this](std::string_view id) -> std::optional<ai::PatientCard> {
        auto p = directory_.patient(id);
        if (!p) return std::nullopt;
        return ai::PatientCard{p->name, p->contact, p->registered_at};
      },
      [this](std::string_view id) {
        auto d = directory_.doctor(id);
        return d ? d->name : std::string(id);
      },
      security::SchemaRegistry::builtin().key_list("vitals_keys"),
  });

  gateway_.mount(gateway::Service::identity,
                 [this](const HttpRequest& r) { return identity_service(r); });
  gateway_.mount(gateway::Service::directory,
                 [this](const HttpRequest& r) { return directory_service(r); });
  gateway_.mount(gateway::Service::records,
                 [this](const HttpRequest& r) { return records_service(r); });
  gateway_.mount(gateway::Service::audit,
                 [this](const HttpRequest& r) { return audit_service(r); });
  gateway_.mount(gateway::Service::ai, [this](const HttpRequest& r) { return ai_service(r); });
}

Platform::~Platform() = default;

HttpResponse Platform::handle(const HttpRequest& request) { return gateway_.handle(request); }

std::string Platform::issue_token(std::string_view principal_id) const {
  auto role = directory_.role_of(principal_id);
  if (!role) throw Error(ErrorKind::not_found, "unknown principal");
  return identity_.issue_user_token(principal_id, *role, options_.user_token_ttl);
}

security::RequestContext Platform::context(const HttpRequest& request, json payload) const {
  security::RequestContext ctx;
  ctx.raw_token = request.bearer_token();
  ctx.operation = request.method + " " + request.path;
  ctx.payload = std::move(payload);
  ctx.source_ip = gateway_.client_ip(request);
  ctx.user_agent = request.header("User-Agent").value_or("");
  return ctx;
}

identity::PrincipalClaims Platform::authenticate(const HttpRequest& request) const {
  const auto token = request.bearer_token();
  if (token.empty()) throw Error(ErrorKind::unauthorized, "Unauthorized: missing bearer token");
  return identity_.validate_token(token);
}

HttpResponse Platform::identity_service(const HttpRequest& request) {
  const auto seg = segments(request.path);
  if (request.method != "POST" || seg.size() != 2) return method_not_allowed(request);
  const auto body = parse_body(request);

  if (seg[1] == "login") {
    const auto id = field(body, "username");
    const auto token = identity_.login(id, field(body, "password"), options_.user_token_ttl);
    return HttpResponse::json(200, {{"access_token", token},
                                    {"token_type", "Bearer"},
                                    {"expires_in", options_.user_token_ttl.count()}});
  }
  if (seg[1] == "token") {
    std::set<std::string> scopes;
    std::istringstream in(field(body, "scope", false));
    for (std::string s; in >> s;) scopes.insert(s);
    const auto token =
        identity_.issue_service_token(field(body, "client_id"), field(body, "client_secret"), scopes);
    return HttpResponse::json(200, {{"access_token", token},
                                    {"token_type", "Bearer"},
                                    {"expires_in", identity_.config().service_token_ttl.count()}});
  }
  if (seg[1] == "register") {
    directory::PatientProfile p;
    p.national_id = field(body, "national_id");
    p.name = field(body, "name");
    p.contact = field(body, "contact", false);
    const auto password = field(body, "password");
    const auto id = directory_.self_register_patient(std::move(p));
    identity_.set_password(id, password);
    return HttpResponse::json(201, {{"patient_id", id}});
  }
  return method_not_allowed(request);
}

HttpResponse Platform::directory_service(const HttpRequest& request) {
  const auto seg = segments(request.path);
  const auto& m = request.method;
  const auto caller = authenticate(request);
  const auto n = seg.size();
  const auto& area = seg.at(1);

  if (area == "user" && n == 3 && seg[2] == "profile" && m == "GET") {
    return HttpResponse::json(200, directory_.profile(caller));
  }

  if (area == "patients" && n == 2 && m == "POST") {
    const auto body = parse_body(request);
    directory::PatientProfile p;
    p.national_id = field(body, "national_id");
    p.name = field(body, "name");
    p.contact = field(body, "contact", false);
    const auto id = directory_.register_patient(caller, std::move(p));
    if (auto pw = field(body, "password", false); !pw.empty()) identity_.set_password(id, pw);
    return HttpResponse::json(201, {{"patient_id", id}});
  }

  if (area == "doctors" && n == 2 && m == "POST") {
    const auto body = parse_body(request);
    directory::DoctorProfile d;
    d.name = field(body, "name");
    d.specialty = field(body, "specialty", false);
    if (auto it = body.find("hospital_ids"); it != body.end()) {
      if (!it->is_array()) {
        throw Error(ErrorKind::validation_error, "hospital_ids must be a list", {"hospital_ids"});
      }
      for (const auto& h : *it) d.hospital_ids.insert(h.get<std::string>());
    }
    const auto id = directory_.register_doctor(caller, std::move(d));
    if (auto pw = field(body, "password", false); !pw.empty()) identity_.set_password(id, pw);
    return HttpResponse::json(201, {{"doctor_id", id}});
  }

  if (area == "admissions") {
    if (n == 2 && m == "POST") {
      const auto body = parse_body(request);
      auto a = directory_.admit(caller, field(body, "patient_id"), field(body, "doctor_id"));
      return HttpResponse::json(201, directory::to_json(a));
    }
    if (n == 2 && m == "GET") {
      auto filter = directory::AdmissionFilter::all();
      if (auto d = query(request, "doctor_id")) filter = directory::AdmissionFilter::doctor(*d);
      if (auto p = query(request, "patient_id")) filter = directory::AdmissionFilter::patient(*p);
      return HttpResponse::json(200, to_array(directory_.list_admissions(caller, filter)));
    }
    if (n == 4 && seg[3] == "discharge" && m == "POST") {
      return HttpResponse::json(200, directory::to_json(directory_.discharge(caller, seg[2])));
    }
  }

  if (area == "requests" && n >= 3 && seg[2] == "data-addition") {
    if (n == 3 && m == "POST") {
      const auto body = parse_body(request);
      directory::DataAdditionRequest r;
      const auto type = field(body, "data_type");
      auto dt = directory::data_type_from_string(type);
      if (!dt) throw Error(ErrorKind::validation_error, "unknown data_type", {"data_type"});
      r.data_type = *dt;
      auto date = parse_date(field(body, "issuance_date"));
      if (!date) throw Error(ErrorKind::validation_error, "issuance_date invalid", {"issuance_date"});
      r.issuance_date = *date;
      r.document_ref = field(body, "document_ref", false);
      r.description = field(body, "description", false);
      const auto id = directory_.submit_data_addition_request(caller, std::move(r));
      return HttpResponse::json(201, {{"request_id", id}});
    }
    if (n == 3 && m == "GET") {
      return HttpResponse::json(200, to_array(directory_.list_data_requests(caller)));
    }
    if (n == 5 && seg[4] == "forward" && m == "POST") {
      const auto body = parse_body(request);
      return HttpResponse::json(
          200, directory::to_json(directory_.forward_request(caller, seg[3], field(body, "doctor_id"))));
    }
    if (n == 5 && seg[4] == "resolve" && m == "POST") {
      const auto body = parse_body(request);
      const auto v = field(body, "verdict");
      directory::Verdict verdict;
      if (v == "approved") {
        verdict = directory::Verdict::approved;
      } else if (v == "rejected") {
        verdict = directory::Verdict::rejected;
      } else {
        throw Error(ErrorKind::validation_error, "verdict must be approved or rejected", {"verdict"});
      }
      return HttpResponse::json(200,
                                directory::to_json(directory_.resolve_request(caller, seg[3], verdict)));
    }
  }

  if (area == "requests" && n >= 3 && seg[2] == "examination") {
    if (n == 3 && m == "POST") {
      const auto body = parse_body(request);
      auto r = directory_.request_examination(caller, field(body, "requested_type"));
      return HttpResponse::json(201, directory::to_json(r));
    }
    if (n == 3 && m == "GET") {
      return HttpResponse::json(200, to_array(directory_.list_examination_requests(caller)));
    }
    if (n == 5 && seg[4] == "schedule" && m == "POST") {
      const auto body = parse_body(request);
      auto r = directory_.schedule_examination(caller, seg[3], field(body, "doctor_id"));
      return HttpResponse::json(200, directory::to_json(r));
    }
  }

  if (area == "hospitals" && n == 2 && m == "GET") {
    return HttpResponse::json(200, to_array(directory_.list_hospitals(caller)));
  }

  if (area == "contacts" && n == 2) {
    if (m == "POST") {
      const auto body = parse_body(request);
      directory::EmergencyContact c;
      c.name = field(body, "name", false);
      c.phone = field(body, "phone", false);
      const auto id = directory_.assign_emergency_contact(caller, std::move(c));
      return HttpResponse::json(201, {{"contact_id", id}});
    }
    if (m == "GET") {
      if (!caller.has_role(identity::Role::patient)) {
        throw Error(ErrorKind::forbidden, "Forbidden: contacts are listed by their patient");
      }
      return HttpResponse::json(200, to_array(directory_.emergency_contacts(caller.subject)));
    }
  }
  return method_not_allowed(request);
}

HttpResponse Platform::records_service(const HttpRequest& request) {
  const auto seg = segments(request.path);  // api records {patient} ...
  const auto& m = request.method;
  const auto n = seg.size();

  if (n == 2 && m == "POST") {
    auto body = parse_body(request);
    auto ctx = context(request, json::object());
    ctx.target_patient = field(body, "patient_id");
    return from_pipeline(records_.create_record(std::move(ctx)), 201);
  }
  if (n < 3) return method_not_allowed(request);

  const auto& patient = seg[2];
  auto with_target = [&](json payload) {
    auto ctx = context(request, std::move(payload));
    ctx.target_patient = patient;
    return ctx;
  };

  if (n == 3 && m == "GET") return from_pipeline(records_.get_record(with_target(json::object())));
  if (n == 4 && seg[3] == "visits") {
    if (m == "GET") return from_pipeline(records_.list_visits(with_target(json::object())));
    if (m == "POST") return from_pipeline(records_.create_visit(with_target(parse_body(request))), 201);
  }

  const auto kind = records::entity_kind_from_string(seg[3]);
  if (!kind) return method_not_allowed(request);
  if (n == 4 && m == "POST") {
    return from_pipeline(records_.upsert_entity(with_target(parse_body(request)), *kind), 201);
  }
  if (n == 4 && m == "PUT" && *kind == records::EntityKind::lifestyle) {
    return from_pipeline(records_.upsert_entity(with_target(parse_body(request)), *kind));
  }
  if (n == 5 && m == "PUT") {
    return from_pipeline(records_.upsert_entity(with_target(parse_body(request)), *kind, seg[4]));
  }
  if (n == 5 && m == "DELETE") {
    return from_pipeline(records_.delete_entity(with_target(json::object()), *kind, seg[4]));
  }
  return method_not_allowed(request);
}

HttpResponse Platform::audit_service(const HttpRequest& request) {
  if (request.method != "GET" || segments(request.path).size() != 2) {
    return method_not_allowed(request);
  }
  const auto caller = authenticate(request);
  audit::AuditQuery filter;
  filter.actor_id = query(request, "actor_id");
  filter.document_id = query(request, "document_id");
  if (auto a = query(request, "action")) filter.action = audit::parse_action(*a);
  for (auto [name, slot] : {std::pair{"from", &filter.from}, std::pair{"to", &filter.to}}) {
    if (auto t = query(request, name)) {
      auto ts = parse_iso8601(*t);
      if (!ts) throw Error(ErrorKind::validation_error, std::string(name) + " must be ISO-8601", {name});
      *slot = *ts;
    }
  }
  audit::Page page;
  page.offset = parse_size(query(request, "offset"), 0, "offset");
  page.limit = parse_size(query(request, "limit"), page.limit, "limit");
  const auto entries = audit_.query(caller, filter, page);

  if (query(request, "format").value_or("json") == "ndjson") {
    HttpResponse r;
    r.headers["Content-Type"] = "application/x-ndjson";
    for (const auto& e : entries) r.body += audit::to_json(e).dump() + "\n";
    return r;
  }
  json out = json::array();
  for (const auto& e : entries) out.push_back(audit::to_json(e));
  return HttpResponse::json(200, out);
}

HttpResponse Platform::ai_service(const HttpRequest& request) {
  const auto seg = segments(request.path);
  const auto& m = request.method;
  const auto n = seg.size();

  if (seg[0] == "chat" || seg[0] == "chats") {
    const auto caller = authenticate(request);
    if (seg[0] == "chats" && n == 1 && m == "GET") {
      json out = json::array();
      for (const auto& s : orchestrator_->list_conversations(caller)) out.push_back(ai::to_json(s));
      return HttpResponse::json(200, out);
    }
    if (seg[0] == "chat" && n == 2 && m == "POST" && seg[1] == "initiate") {
      const auto body = parse_body(request);
      if (auto d = field(body, "doctor_id", false); !d.empty() && d != caller.subject) {
        throw Error(ErrorKind::forbidden, "Forbidden: doctor_id does not match the caller");
      }
      auto reply = orchestrator_->chat_initiate(caller, field(body, "user_input"));
      return HttpResponse::json(
          201, {{"conversation_id", reply.conversation_id}, {"bot_reply", reply.bot_reply}});
    }
    if (seg[0] == "chat" && n == 2 && m == "POST" && seg[1] == "continue") {
      const auto body = parse_body(request);
      const auto id = field(body, "conversation_id");
      auto reply = orchestrator_->chat_continue(caller, id, field(body, "user_input"));
      return HttpResponse::json(200, {{"conversation_id", id}, {"bot_reply", reply}});
    }
    if (seg[0] == "chat" && n == 2 && m == "GET") {
      return HttpResponse::json(200, ai::to_json(orchestrator_->get_conversation(caller, seg[1])));
    }
    return method_not_allowed(request);
  }

  // api ai {action} ...
  if (n < 4 || m != "POST") return method_not_allowed(request);
  const auto& action = seg[2];

  if (action == "summarize" && n == 4) {
    auto ctx = context(request);
    ctx.target_patient = seg[3];
    return from_pipeline(orchestrator_->summarize_history(std::move(ctx)));
  }
  if (action == "report" && n == 5) {
    auto ctx = context(request);
    ctx.target_patient = seg[3];
    return from_pipeline(orchestrator_->generate_report(std::move(ctx), seg[4]), 201);
  }
  if (action == "xray" && n == 4) {
    auto ctx = context(request);
    ctx.target_patient = seg[3];
    std::optional<ai::ImageFormat> format;
    if (auto f = query(request, "format")) {
      format = ai::image_format_from_string(*f);
      if (!format) throw Error(ErrorKind::validation_error, "unknown image format", {"format"});
    } else {
      format = ai::sniff_format(request.body);
      if (!format) throw Error(ErrorKind::validation_error, "unrecognised image data", {"image"});
    }
    auto name = request.header("X-Upload-Filename").value_or("");
    return from_pipeline(
        orchestrator_->classify_xray(std::move(ctx), request.body, *format, std::move(name)), 201);
  }
  if (action == "xray" && n == 5 && seg[4] == "review") {
    const auto body = parse_body(request);
    auto verdict = ai::review_verdict_from_string(field(body, "verdict"));
    if (!verdict || *verdict == ai::ReviewVerdict::pending) {
      throw Error(ErrorKind::validation_error, "verdict must be confirmed, modified or overridden",
                  {"verdict"});
    }
    std::optional<ai::XrayLabel> label;
    if (auto l = field(body, "final_label", false); !l.empty()) {
      label = ai::xray_label_from_string(l);
      if (!label) throw Error(ErrorKind::validation_error, "unknown label", {"final_label"});
    }
    // verdict and final_label are parsed here; the pipeline payload stays empty.
    return from_pipeline(orchestrator_->review_xray(context(request), seg[3], *verdict, label));
  }
  return method_not_allowed(request);
}

DemoDeployment seed_demo(Platform& platform, int doctors, int patients) {
  auto& dir = platform.directory();
  auto& id = platform.identity();
  DemoDeployment demo;

  demo.admin.id = dir.add_admin({"", "Desk Administrator"});
  demo.admin.password = "admin-pass";
  id.set_password(demo.admin.id, demo.admin.password);
  demo.admin.token = platform.issue_token(demo.admin.id);
  const auto admin = id.validate_token(demo.admin.token);
  demo.hospital_id = dir.add_hospital({"", "Central Hospital", "Cairo"});

  for (int i = 0; i < doctors; ++i) {
    directory::DoctorProfile d;
    d.name = "Dr. Demo " + std::to_string(i + 1);
    d.specialty = i % 2 == 0 ? "Internal Medicine" : "Radiology";
    d.hospital_ids = {demo.hospital_id};
    DemoUser u{dir.register_doctor(admin, d), "doctor-pass-" + std::to_string(i + 1), {}};
    id.set_password(u.id, u.password);
    u.token = platform.issue_token(u.id);
    demo.doctors.push_back(std::move(u));
  }
  for (int i = 0; i < patients; ++i) {
    directory::PatientProfile p;
    auto digits = std::to_string(29001010000000LL + i);
    p.national_id = digits;
    p.name = "Patient Demo " + std::to_string(i + 1);
    p.contact = "+20-100-000-" + std::to_string(1000 + i);
    DemoUser u{dir.register_patient(admin, p), "patient-pass-" + std::to_string(i + 1), {}};
    id.set_password(u.id, u.password);
    u.token = platform.issue_token(u.id);
    if (!demo.doctors.empty()) {
      const auto& doc = demo.doctors[i % demo.doctors.size()];
      dir.admit(admin, u.id, doc.id);
      security::RequestContext ctx;
      ctx.raw_token = doc.token;
      ctx.target_patient = u.id;
      ctx.source_ip = "127.0.0.1";
      ctx.user_agent = "ehr-seed";
      auto r = platform.records().create_record(std::move(ctx));
      if (!r.ok()) throw Error(r.failure->kind, "seeding record: " + r.failure->detail);
    }
    demo.patients.push_back(std::move(u));
  }
  return demo;
}

}  // namespace ehr::api
