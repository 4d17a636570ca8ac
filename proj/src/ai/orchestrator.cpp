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

#include "ehr/ai/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ehr/ai/record_text.hpp"
#include "ehr/core/time_format.hpp"

namespace ehr::ai {

using security::HandlerResult;
using security::OperationSpec;
using security::PipelineResult;
using security::RequestContext;
namespace scope = identity::scope;

namespace {

constexpr int kLinesPerPage = 48;
constexpr std::size_t kPreviewChars = 80;
constexpr const char* kDegradedText =
    "AI recommendations unavailable: the text generator could not be reached. "
    "Physician review required.";

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

void require_doctor(const identity::PrincipalClaims& caller) {
  if (!caller.has_role(identity::Role::doctor)) {
    throw Error(ErrorKind::forbidden, "Forbidden: chat is available to doctors only");
  }
}

void require_input(const std::string& input) {
  if (blank(input)) {
    throw Error(ErrorKind::validation_error, "user_input must be nonempty", {"user_input"});
  }
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

template <class E>
std::string enum_text(E e) {
  return nlohmann::json(e).get<std::string>();
}

SummaryResult summary_from_json(const nlohmann::json& j) {
  SummaryResult s;
  s.patient_id = j.at("patient_id").get<std::string>();
  s.summary_text = j.at("summary_text").get<std::string>();
  s.generated_at = parse_iso8601(j.at("generated_at").get<std::string>()).value_or(Timestamp{});
  s.source_record_version = j.at("source_record_version").get<std::uint64_t>();
  return s;
}

}  // namespace

std::string_view to_string(ReviewVerdict v) noexcept {
  switch (v) {
    case ReviewVerdict::pending: return "pending";
    case ReviewVerdict::confirmed: return "confirmed";
    case ReviewVerdict::modified: return "modified";
    case ReviewVerdict::overridden: return "overridden";
  }
  return "pending";
}

std::optional<ReviewVerdict> review_verdict_from_string(std::string_view s) noexcept {
  if (s == "confirmed") return ReviewVerdict::confirmed;
  if (s == "modified") return ReviewVerdict::modified;
  if (s == "overridden") return ReviewVerdict::overridden;
  return std::nullopt;
}

nlohmann::json to_json(const ConversationLog& log) {
  nlohmann::json turns = nlohmann::json::array();
  for (const auto& t : log.turns) {
    turns.push_back({{"author", to_string(t.author)},
                     {"content", t.content},
                     {"at", format_iso8601(t.at)}});
  }
  return {{"conversation_id", log.conversation_id},
          {"doctor_id", log.doctor_id},
          {"system_role", log.system_role},
          {"turns", std::move(turns)},
          {"created_at", format_iso8601(log.created_at)}};
}

nlohmann::json to_json(const ConversationSummary& s) {
  return {{"conversation_id", s.conversation_id},
          {"first_turn_preview", s.first_turn_preview},
          {"created_at", format_iso8601(s.created_at)}};
}

nlohmann::json to_json(const SummaryResult& s) {
  return {{"patient_id", s.patient_id},
          {"summary_text", s.summary_text},
          {"generated_at", format_iso8601(s.generated_at)},
          {"source_record_version", s.source_record_version}};
}

nlohmann::json to_json(const MedicalReport& r) {
  nlohmann::json sections = nlohmann::json::array();
  for (const auto& [key, text] : r.sections) sections.push_back({{"key", key}, {"text", text}});
  return {{"report_id", r.report_id},
          {"patient_id", r.patient_id},
          {"visit_id", r.visit_id},
          {"sections", std::move(sections)},
          {"ai_degraded", r.ai_degraded},
          {"storage_ref", r.storage_ref},
          {"layout", r.layout},
          {"generated_at", format_iso8601(r.generated_at)}};
}

nlohmann::json to_json(const XrayResult& r) {
  nlohmann::json j = {{"result_id", r.result_id},
                      {"patient_id", r.patient_id},
                      {"image_ref", r.image_ref},
                      {"source_name", r.source_name},
                      {"format", to_string(r.format)},
                      {"label", to_string(r.label)},
                      {"confidence", r.confidence},
                      {"reviewer_verdict", to_string(r.reviewer_verdict)},
                      {"reviewer_id", nullptr},
                      {"final_label", nullptr},
                      {"created_at", format_iso8601(r.created_at)}};
  if (r.reviewer_id) j["reviewer_id"] = *r.reviewer_id;
  if (r.final_label) j["final_label"] = to_string(*r.final_label);
  return j;
}

AiOrchestrator::AiOrchestrator(OrchestratorDeps deps) : d_(std::move(deps)) {
  // Write-through invalidation: a changed record never serves an old summary.
  auto& cache = d_.cache;
  d_.records.subscribe([&cache](const std::string& patient) { cache.invalidate_patient(patient); });
}

std::string AiOrchestrator::summary_cache_key(std::string_view patient_id) {
  return "ai:sum:" + std::string(patient_id);
}

std::string AiOrchestrator::service_token() {
  std::lock_guard lock(token_mu_);
  const auto now = unix_seconds(d_.clock.now());
  if (token_.empty() || now + 60 >= token_expires_) {
    token_ = d_.identity.issue_service_token(d_.service.client_id, d_.service.client_secret,
                                             {std::string(scope::kRecordRead)});
    token_expires_ = d_.identity.validate_token(token_).expires_at;
  }
  return token_;
}

records::ResolvedRecord AiOrchestrator::fetch_record(const std::string& patient_id) {
  RequestContext m2m;
  m2m.raw_token = service_token();
  m2m.payload = nlohmann::json::object();
  m2m.target_patient = patient_id;
  m2m.source_ip = "internal";
  m2m.user_agent = "ai-orchestrator";
  auto result = d_.records.get_record(std::move(m2m));
  if (!result.ok()) throw Error(result.failure->kind, result.failure->detail);
  return result.body->get<records::ResolvedRecord>();
}

PipelineResult AiOrchestrator::summarize_history(RequestContext ctx) {
  static const OperationSpec op{"summarize_history", {"getRecord"},
                                std::string(scope::kRecordRead), "empty",
                                audit::Action::VIEW, "summaries", "History Summarized"};
  if (ctx.payload.is_null()) ctx.payload = nlohmann::json::object();
  return d_.pipeline.process_request(std::move(ctx), op, [this](const RequestContext& c) {
    const auto& patient = *c.target_patient;
    const auto key = summary_cache_key(patient);
    const auto current = d_.records.version(patient);
    if (!current) throw Error(ErrorKind::not_found, "no medical record for patient");

    if (auto hit = d_.cache.get(key)) {
      auto cached = summary_from_json(nlohmann::json::parse(*hit));
      if (cached.source_record_version == *current) {
        auto body = to_json(cached);
        body["cached"] = true;
        return HandlerResult{std::move(body), patient};
      }
    }

    // No locks are held across the generator call.
    const auto record = fetch_record(patient);
    const auto text = serialize_record_to_text(record);
    SummaryResult s;
    s.patient_id = patient;
    s.summary_text = d_.generator.generate(d_.prompts.summarizer, {{ChatRole::user, text}});
    s.generated_at = d_.clock.now();
    s.source_record_version = record.record.version;

    {
      std::unique_lock lock(store_mu_);
      summaries_[patient].push_back(s);
    }
    d_.cache.put(key, to_json(s).dump());
    auto body = to_json(s);
    body["cached"] = false;
    return HandlerResult{std::move(body), patient};
  });
}

ChatReply AiOrchestrator::chat_initiate(const identity::PrincipalClaims& caller,
                                        const std::string& user_input) {
  require_doctor(caller);
  require_input(user_input);
  const auto reply =
      d_.generator.generate(d_.prompts.chatbot, {{ChatRole::user, user_input}});

  auto conv = std::make_shared<Conversation>();
  const auto now = d_.clock.now();
  conv->log.conversation_id = d_.ids.next("conversation");
  conv->log.doctor_id = caller.subject;
  conv->log.system_role = d_.prompts.chatbot;
  conv->log.created_at = now;
  conv->log.turns.push_back({ChatRole::user, user_input, now});
  conv->log.turns.push_back({ChatRole::assistant, reply, now});
  const auto id = conv->log.conversation_id;
  {
    std::unique_lock lock(chats_mu_);
    chats_.emplace(id, std::move(conv));
  }
  return {id, reply};
}

std::shared_ptr<AiOrchestrator::Conversation> AiOrchestrator::find_conversation(
    const identity::PrincipalClaims& caller, const std::string& id) const {
  require_doctor(caller);
  std::shared_ptr<Conversation> conv;
  {
    std::shared_lock lock(chats_mu_);
    auto it = chats_.find(id);
    if (it == chats_.end()) throw Error(ErrorKind::not_found, "unknown conversation");
    conv = it->second;
  }
  // doctor_id never changes after creation, so no lock is needed to read it.
  if (conv->log.doctor_id != caller.subject) {
    throw Error(ErrorKind::forbidden, "Forbidden: conversation belongs to another doctor");
  }
  return conv;
}

std::string AiOrchestrator::chat_continue(const identity::PrincipalClaims& caller,
                                          const std::string& conversation_id,
                                          const std::string& user_input) {
  auto conv = find_conversation(caller, conversation_id);
  require_input(user_input);

  // Single writer per conversation.
  std::lock_guard lock(conv->mu);
  std::vector<ChatMessage> messages;
  messages.reserve(conv->log.turns.size() + 1);
  for (const auto& t : conv->log.turns) messages.push_back({t.author, t.content});
  messages.push_back({ChatRole::user, user_input});
  const auto reply = d_.generator.generate(conv->log.system_role, messages);
  const auto now = d_.clock.now();
  conv->log.turns.push_back({ChatRole::user, user_input, now});
  conv->log.turns.push_back({ChatRole::assistant, reply, now});
  return reply;
}

std::vector<ConversationSummary> AiOrchestrator::list_conversations(
    const identity::PrincipalClaims& caller) const {
  require_doctor(caller);
  std::vector<std::shared_ptr<Conversation>> mine;
  {
    std::shared_lock lock(chats_mu_);
    for (const auto& [id, conv] : chats_) {
      if (conv->log.doctor_id == caller.subject) mine.push_back(conv);
    }
  }
  std::vector<ConversationSummary> out;
  for (const auto& conv : mine) {
    std::lock_guard lock(conv->mu);
    const auto& first = conv->log.turns.front().content;
    out.push_back({conv->log.conversation_id, first.substr(0, kPreviewChars),
                   conv->log.created_at});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.created_at != b.created_at) return a.created_at > b.created_at;
    return a.conversation_id > b.conversation_id;
  });
  return out;
}

ConversationLog AiOrchestrator::get_conversation(const identity::PrincipalClaims& caller,
                                                 const std::string& conversation_id) const {
  auto conv = find_conversation(caller, conversation_id);
  std::lock_guard lock(conv->mu);
  return conv->log;
}

MedicalReport AiOrchestrator::build_report(const records::ResolvedRecord& record,
                                           const records::Visit& visit) {
  MedicalReport report;
  report.report_id = d_.ids.next("report");
  report.patient_id = record.record.patient_id;
  report.visit_id = visit.visit_id;
  report.generated_at = d_.clock.now();

  const auto none = [](const std::string& s, const char* fallback) {
    return s.empty() ? std::string(fallback) : s;
  };
  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
    return out;
  };

  std::ostringstream info;
  const auto card = d_.patients ? d_.patients(record.record.patient_id) : std::nullopt;
  info << "Name: " << (card ? card->name : "unknown") << "\n";
  info << "Patient ID: " << record.record.patient_id << "\n";
  if (card) {
    info << "Contact: " << none(card->contact, "not provided") << "\n";
    info << "Registered: " << format_date(to_date(card->registered_at)) << "\n";
  }
  std::vector<std::string> chronic, allergies, meds;
  for (const auto& c : record.conditions) {
    if (c.chronic) chronic.push_back(c.name);
  }
  for (const auto& a : record.allergies) {
    allergies.push_back(a.allergen + " (" + enum_text(a.severity) + ")");
  }
  for (const auto& m : record.medications) {
    if (m.active) meds.push_back(m.name + " " + m.dosage);
  }
  info << "Chronic conditions: " << none(join(chronic), "none recorded") << "\n";
  info << "Allergies: " << none(join(allergies), "none recorded") << "\n";
  info << "Current medications: " << none(join(meds), "none recorded") << "\n";
  if (const auto& l = record.record.lifestyle) {
    info << "Lifestyle: smoking " << enum_text(l->smoking) << "; alcohol "
         << enum_text(l->alcohol) << "; exercise " << none(l->exercise, "not stated") << "\n";
  } else {
    info << "Lifestyle: not recorded\n";
  }

  std::ostringstream summary;
  summary << "Visit ID: " << visit.visit_id << "\n";
  summary << "Date: " << visit.date << "\n";
  summary << "Examination type: " << enum_text(visit.examination_type) << "\n";
  summary << "Doctor: "
          << (d_.doctor_name ? d_.doctor_name(visit.doctor_id) : visit.doctor_id) << "\n";
  summary << "Complaints: " << none(visit.complaints, "none stated") << "\n";
  summary << "Symptoms: " << none(join(visit.symptoms), "none stated") << "\n";

  std::ostringstream dx;
  dx << "Diagnosis: " << none(visit.diagnosis, "not stated") << "\n";
  dx << "Treatments:\n";
  if (visit.treatments.empty()) dx << "- none prescribed\n";
  for (const auto& t : visit.treatments) dx << "- " << t.name << " (" << t.dosage << ")\n";
  dx << "Doctor's notes: " << none(visit.notes, "none") << "\n";

  std::ostringstream vitals;
  vitals << "Vitals:\n";
  if (visit.vitals.empty()) {
    vitals << "- no vitals recorded\n";
  } else {
    for (const auto& key : d_.vitals_order) {
      auto it = visit.vitals.find(key);
      if (it != visit.vitals.end()) vitals << "- " << key << ": " << format_measurement(it->second) << "\n";
    }
  }
  vitals << "Lab results:\n";
  bool any_lab = false;
  for (const auto& a : visit.attachments) {
    if (a.kind == records::AttachmentKind::lab_result) {
      vitals << "- lab result document " << a.storage_ref << "\n";
      any_lab = true;
    }
  }
  if (!any_lab) vitals << "- no lab results attached\n";

  std::string recommendations;
  try {
    const auto prompt = "Visit:\n" + serialize_visit_to_text(visit) + "\n\n" +
                        serialize_record_to_text(record);
    recommendations = d_.generator.generate(d_.prompts.report_recommender,
                                            {{ChatRole::user, prompt}});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::upstream_error) throw;
    report.ai_degraded = true;
    recommendations = std::string(kDegradedText) + "\n";
  }

  const std::string texts[] = {info.str(), summary.str(), dx.str(), vitals.str(),
                               recommendations};
  for (std::size_t i = 0; i < std::size(kReportSections); ++i) {
    report.sections.emplace_back(kReportSections[i].first, texts[i]);
  }

  // Rendered document plus a page layout: each page holds kLinesPerPage
  // lines; sections crossing a page boundary continue on the next page.
  std::vector<std::string> lines = {
      "MEDICAL REPORT",
      "Report ID: " + report.report_id,
      "Generated: " + format_iso8601(report.generated_at),
      ""};
  nlohmann::json pages = nlohmann::json::array();
  auto page_of = [](std::size_t line) { return static_cast<int>(line / kLinesPerPage) + 1; };
  for (std::size_t i = 0; i < report.sections.size(); ++i) {
    const auto first = lines.size();
    lines.push_back(std::to_string(i + 1) + ". " + kReportSections[i].second);
    for (auto& l : split_lines(report.sections[i].second)) lines.push_back(std::move(l));
    lines.push_back("");
    for (std::size_t at = first; at < lines.size();) {
      const int page = page_of(at);
      const std::size_t end = std::min(lines.size(), static_cast<std::size_t>(page) * kLinesPerPage);
      if (pages.size() < static_cast<std::size_t>(page)) {
        pages.push_back({{"number", page}, {"blocks", nlohmann::json::array()}});
      }
      pages[page - 1]["blocks"].push_back({{"section", report.sections[i].first},
                                           {"heading", kReportSections[i].second},
                                           {"continued", at != first},
                                           {"first_line", at % kLinesPerPage},
                                           {"line_count", end - at}});
      at = end;
    }
  }
  std::string document;
  for (const auto& l : lines) document += l + "\n";
  report.layout = {{"page_size", "A4"},
                   {"orientation", "portrait"},
                   {"lines_per_page", kLinesPerPage},
                   {"page_count", pages.size()},
                   {"pages", std::move(pages)}};
  report.storage_ref = d_.blobs.put(std::move(document), "text/plain; charset=utf-8");
  return report;
}

PipelineResult AiOrchestrator::generate_report(RequestContext ctx, std::string visit_id) {
  static const OperationSpec op{"generate_report", {"getVisit"},
                                std::string(scope::kReportWrite), "empty",
                                audit::Action::CREATE, "reports", "Medical Report Generated"};
  if (ctx.payload.is_null()) ctx.payload = nlohmann::json::object();
  return d_.pipeline.process_request(std::move(ctx), op, [&](const RequestContext& c) {
    const auto record = fetch_record(*c.target_patient);
    auto it = std::find_if(record.visits.begin(), record.visits.end(),
                           [&](const records::Visit& v) { return v.visit_id == visit_id; });
    if (it == record.visits.end()) throw Error(ErrorKind::not_found, "unknown visit");
    if (!c.claims->is_service() && it->doctor_id != c.claims->subject) {
      throw Error(ErrorKind::forbidden, "Forbidden: only the visit's doctor may generate its report");
    }
    auto report = build_report(record, *it);
    auto body = to_json(report);
    const auto id = report.report_id;
    {
      std::unique_lock lock(store_mu_);
      reports_.emplace(id, std::move(report));
    }
    return HandlerResult{std::move(body), id};
  });
}

PipelineResult AiOrchestrator::classify_xray(RequestContext ctx, std::string image_bytes,
                                             ImageFormat format, std::string source_name) {
  static const OperationSpec op{"classify_xray", {"getRecord"}, "", "empty",
                                audit::Action::CREATE, "xray_results", "X-ray Classified"};
  if (ctx.payload.is_null()) ctx.payload = nlohmann::json::object();
  return d_.pipeline.process_request(std::move(ctx), op, [&](const RequestContext& c) {
    const auto tensor = to_model_input(decode_image(image_bytes, format), source_name);
    const auto cls = d_.classifier.classify(tensor);
    if (!std::isfinite(cls.confidence) || cls.confidence < 0 || cls.confidence > 1) {
      throw Error(ErrorKind::internal, "classifier returned confidence outside [0,1]");
    }
    XrayResult r;
    r.result_id = d_.ids.next("xray");
    r.patient_id = *c.target_patient;
    r.image_ref = d_.blobs.put(std::move(image_bytes),
                               format == ImageFormat::png    ? "image/png"
                               : format == ImageFormat::jpeg ? "image/jpeg"
                                                             : "application/dicom");
    r.source_name = source_name;
    r.format = format;
    r.label = cls.label;
    r.confidence = cls.confidence;
    r.created_at = d_.clock.now();
    auto body = to_json(r);
    {
      std::unique_lock lock(store_mu_);
      xray_history_[r.patient_id].push_back(r.result_id);
      xrays_.emplace(r.result_id, r);
    }
    return HandlerResult{std::move(body), r.result_id};
  });
}

PipelineResult AiOrchestrator::review_xray(RequestContext ctx, std::string result_id,
                                           ReviewVerdict verdict,
                                           std::optional<XrayLabel> final_label) {
  static const OperationSpec op{"review_xray", {"getRecord"}, "", "empty",
                                audit::Action::UPDATE, "xray_results", "X-ray Reviewed"};
  // Unknown ids are reported only to authenticated callers; anyone else goes
  // through the pipeline and fails (and is audited) at authentication.
  bool authenticated = true;
  try {
    d_.pipeline.authenticate_layer(ctx);
  } catch (const Error&) {
    authenticated = false;
  }
  if (authenticated) {
    std::shared_lock lock(store_mu_);
    auto it = xrays_.find(result_id);
    if (it == xrays_.end()) throw Error(ErrorKind::not_found, "unknown x-ray result");
    ctx.target_patient = it->second.patient_id;
  }
  if (ctx.payload.is_null()) ctx.payload = nlohmann::json::object();
  return d_.pipeline.process_request(std::move(ctx), op, [&](const RequestContext& c) {
    std::unique_lock lock(store_mu_);
    auto& r = xrays_.at(result_id);
    if (r.reviewer_verdict != ReviewVerdict::pending) {
      throw Error(ErrorKind::conflict, "x-ray result already reviewed");
    }
    switch (verdict) {
      case ReviewVerdict::pending:
        throw Error(ErrorKind::validation_error, "verdict must not be pending", {"verdict"});
      case ReviewVerdict::confirmed:
        if (final_label && *final_label != r.label) {
          throw Error(ErrorKind::validation_error, "confirmed verdict keeps the AI label",
                      {"final_label"});
        }
        final_label = r.label;
        break;
      case ReviewVerdict::modified:
        if (!final_label) {
          throw Error(ErrorKind::validation_error, "final_label required", {"final_label"});
        }
        break;
      case ReviewVerdict::overridden:
        if (!final_label || *final_label == r.label) {
          throw Error(ErrorKind::validation_error, "override must change the label",
                      {"final_label"});
        }
        break;
    }
    r.reviewer_verdict = verdict;
    r.reviewer_id = c.claims->subject;
    r.final_label = final_label;
    return HandlerResult{to_json(r), r.result_id};
  });
}

std::optional<MedicalReport> AiOrchestrator::report(std::string_view report_id) const {
  std::shared_lock lock(store_mu_);
  auto it = reports_.find(report_id);
  if (it == reports_.end()) return std::nullopt;
  return it->second;
}

std::optional<XrayResult> AiOrchestrator::xray(std::string_view result_id) const {
  std::shared_lock lock(store_mu_);
  auto it = xrays_.find(result_id);
  if (it == xrays_.end()) return std::nullopt;
  return it->second;
}

std::vector<XrayResult> AiOrchestrator::xray_history(std::string_view patient_id) const {
  std::shared_lock lock(store_mu_);
  std::vector<XrayResult> out;
  auto it = xray_history_.find(patient_id);
  if (it == xray_history_.end()) return out;
  for (const auto& id : it->second) out.push_back(xrays_.at(id));
  return out;
}

std::vector<SummaryResult> AiOrchestrator::summaries(std::string_view patient_id) const {
  std::shared_lock lock(store_mu_);
  auto it = summaries_.find(patient_id);
  if (it == summaries_.end()) return {};
  return it->second;
}

}  // namespace ehr::ai
