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
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ehr/ai/classifier.hpp"
#include "ehr/ai/generator.hpp"
#include "ehr/ai/image.hpp"
#include "ehr/ai/prompts.hpp"
#include "ehr/gateway/ttl_cache.hpp"
#include "ehr/records/blob_store.hpp"
#include "ehr/records/patient_records.hpp"
#include "ehr/security/pipeline.hpp"

namespace ehr::ai {

struct Turn {
  ChatRole author = ChatRole::user;  // user or assistant
  std::string content;
  Timestamp at{};
};

struct ConversationLog {
  std::string conversation_id;
  std::string doctor_id;
  std::string system_role;
  std::vector<Turn> turns;
  Timestamp created_at{};
};

struct ConversationSummary {
  std::string conversation_id;
  std::string first_turn_preview;
  Timestamp created_at{};
};

struct ChatReply {
  std::string conversation_id;
  std::string bot_reply;
};

struct SummaryResult {
  std::string patient_id;
  std::string summary_text;
  Timestamp generated_at{};
  std::uint64_t source_record_version = 0;
};

// Report section keys in their fixed order, with display headings.
inline constexpr std::pair<const char*, const char*> kReportSections[] = {
    {"patient_information", "Patient Information"},
    {"visit_summary", "Visit Summary"},
    {"diagnosis_and_treatment", "Diagnosis & Treatment"},
    {"vitals_and_lab_results", "Vitals & Lab Results"},
    {"ai_recommendations", "AI Recommendations"},
};

struct MedicalReport {
  std::string report_id;
  std::string patient_id;
  std::string visit_id;
  std::vector<std::pair<std::string, std::string>> sections;  // key -> text, fixed order
  bool ai_degraded = false;
  std::string storage_ref;  // rendered text document
  nlohmann::json layout;    // paginated layout description
  Timestamp generated_at{};
};

enum class ReviewVerdict { pending, confirmed, modified, overridden };

std::string_view to_string(ReviewVerdict v) noexcept;
std::optional<ReviewVerdict> review_verdict_from_string(std::string_view s) noexcept;

struct XrayResult {
  std::string result_id;
  std::string patient_id;
  std::string image_ref;
  std::string source_name;
  ImageFormat format = ImageFormat::png;
  XrayLabel label = XrayLabel::Normal;
  double confidence = 0;
  ReviewVerdict reviewer_verdict = ReviewVerdict::pending;
  std::optional<std::string> reviewer_id;
  std::optional<XrayLabel> final_label;
  Timestamp created_at{};
};

nlohmann::json to_json(const ConversationLog& log);
nlohmann::json to_json(const ConversationSummary& s);
nlohmann::json to_json(const SummaryResult& s);
nlohmann::json to_json(const MedicalReport& r);
nlohmann::json to_json(const XrayResult& r);

struct PatientCard {
  std::string name;
  std::string contact;
  Timestamp registered_at{};
};

using PatientCardLookup = std::function<std::optional<PatientCard>(std::string_view)>;

// Client credentials the orchestrator uses for its own record reads.
struct ServiceIdentity {
  std::string client_id;
  std::string client_secret;
};

struct OrchestratorDeps {
  security::SecurityPipeline& pipeline;
  records::PatientRecords& records;
  identity::IdentityService& identity;
  GeneratorClient& generator;
  ClassifierClient& classifier;
  records::BlobStore& blobs;
  gateway::TtlCache& cache;
  const Clock& clock;
  IdGenerator& ids;
  Prompts prompts;
  ServiceIdentity service;
  PatientCardLookup patients;
  records::DoctorName doctor_name;
  std::vector<std::string> vitals_order;
};

class AiOrchestrator {
 public:
  explicit AiOrchestrator(OrchestratorDeps deps);

  // Runs through the pipeline (getRecord or record:read); the record itself
  // is fetched with the orchestrator's own service token.
  security::PipelineResult summarize_history(security::RequestContext ctx);

  ChatReply chat_initiate(const identity::PrincipalClaims& caller, const std::string& user_input);
  std::string chat_continue(const identity::PrincipalClaims& caller,
                            const std::string& conversation_id, const std::string& user_input);
  std::vector<ConversationSummary> list_conversations(const identity::PrincipalClaims& caller) const;
  ConversationLog get_conversation(const identity::PrincipalClaims& caller,
                                   const std::string& conversation_id) const;

  security::PipelineResult generate_report(security::RequestContext ctx, std::string visit_id);

  security::PipelineResult classify_xray(security::RequestContext ctx, std::string image_bytes,
                                         ImageFormat format, std::string source_name = {});
  security::PipelineResult review_xray(security::RequestContext ctx, std::string result_id,
                                       ReviewVerdict verdict,
                                       std::optional<XrayLabel> final_label);

  std::optional<MedicalReport> report(std::string_view report_id) const;
  std::optional<XrayResult> xray(std::string_view result_id) const;
  std::vector<XrayResult> xray_history(std::string_view patient_id) const;
  std::vector<SummaryResult> summaries(std::string_view patient_id) const;

  static std::string summary_cache_key(std::string_view patient_id);

 private:
  struct Conversation {
    mutable std::mutex mu;
    ConversationLog log;
  };

  std::string service_token();
  records::ResolvedRecord fetch_record(const std::string& patient_id);
  std::shared_ptr<Conversation> find_conversation(const identity::PrincipalClaims& caller,
                                                  const std::string& id) const;
  MedicalReport build_report(const records::ResolvedRecord& record, const records::Visit& visit);

  OrchestratorDeps d_;

  std::mutex token_mu_;
  std::string token_;
  std::int64_t token_expires_ = 0;

  mutable std::shared_mutex chats_mu_;
  std::map<std::string, std::shared_ptr<Conversation>, std::less<>> chats_;

  mutable std::shared_mutex store_mu_;
  std::map<std::string, std::vector<SummaryResult>, std::less<>> summaries_;
  std::map<std::string, MedicalReport, std::less<>> reports_;
  std::map<std::string, XrayResult, std::less<>> xrays_;
  std::map<std::string, std::vector<std::string>, std::less<>> xray_history_;
};

}  // namespace ehr::ai
