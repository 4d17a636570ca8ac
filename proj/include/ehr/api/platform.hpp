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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ehr/ai/classifier.hpp"
#include "ehr/ai/generator.hpp"
#include "ehr/ai/orchestrator.hpp"
#include "ehr/audit/audit_log.hpp"
#include "ehr/core/clock.hpp"
#include "ehr/core/ids.hpp"
#include "ehr/directory/user_directory.hpp"
#include "ehr/gateway/gateway.hpp"
#include "ehr/gateway/rate_limiter.hpp"
#include "ehr/gateway/ttl_cache.hpp"
#include "ehr/identity/identity_service.hpp"
#include "ehr/records/blob_store.hpp"
#include "ehr/records/patient_records.hpp"
#include "ehr/security/pipeline.hpp"

namespace ehr::api {

struct PlatformOptions {
  std::string signing_key = "ehr-local-development-signing-key";
  // NDJSON file backing the audit stream; in-memory when empty.
  std::string audit_path;
  gateway::RateLimits rate_limits;
  gateway::GatewayOptions gateway;
  gateway::CacheTtls cache_ttls;
  // Remote generator; the deterministic mock is used when unset.
  std::optional<ai::HttpGeneratorConfig> generator;
  std::string ai_client_id = "ai-orchestrator";
  std::string ai_client_secret = "ai-orchestrator-secret";
  std::chrono::seconds user_token_ttl{3600};
};

// One in-process deployment: every service, wired together behind the
// gateway. handle() is the only HTTP entry point.
class Platform {
 public:
  Platform(const Clock& clock, IdGenerator& ids, PlatformOptions options = {});
  ~Platform();

  Platform(const Platform&) = delete;
  Platform& operator=(const Platform&) = delete;

  gateway::HttpResponse handle(const gateway::HttpRequest& request);

  const PlatformOptions& options() const { return options_; }
  identity::IdentityService& identity() { return identity_; }
  directory::UserDirectory& directory() { return directory_; }
  audit::AuditLog& audit() { return audit_; }
  security::SecurityPipeline& pipeline() { return pipeline_; }
  records::PatientRecords& records() { return records_; }
  records::BlobStore& blobs() { return blobs_; }
  gateway::TtlCache& cache() { return cache_; }
  gateway::RateLimiter& limiter() { return limiter_; }
  gateway::Gateway& gateway() { return gateway_; }
  ai::AiOrchestrator& orchestrator() { return *orchestrator_; }
  // Null when a remote generator is configured.
  ai::MockGenerator* mock_generator() { return mock_generator_; }

  std::string issue_token(std::string_view principal_id) const;

 private:
  gateway::HttpResponse identity_service(const gateway::HttpRequest& request);
  gateway::HttpResponse directory_service(const gateway::HttpRequest& request);
  gateway::HttpResponse records_service(const gateway::HttpRequest& request);
  gateway::HttpResponse audit_service(const gateway::HttpRequest& request);
  gateway::HttpResponse ai_service(const gateway::HttpRequest& request);

  security::RequestContext context(const gateway::HttpRequest& request,
                                   nlohmann::json payload = nlohmann::json::object()) const;
  identity::PrincipalClaims authenticate(const gateway::HttpRequest& request) const;

  const Clock& clock_;
  IdGenerator& ids_;
  PlatformOptions options_;
  directory::UserDirectory directory_;
  identity::IdentityService identity_;
  audit::AuditLog audit_;
  security::SecurityPipeline pipeline_;
  records::MemoryBlobStore blobs_;
  records::PatientRecords records_;
  gateway::TtlCache cache_;
  gateway::RateLimiter limiter_;
  gateway::Gateway gateway_;
  std::unique_ptr<ai::GeneratorClient> generator_;
  ai::MockGenerator* mock_generator_ = nullptr;
  ai::MockClassifier classifier_;
  std::unique_ptr<ai::AiOrchestrator> orchestrator_;
};

struct DemoUser {
  std::string id;
  std::string password;
  std::string token;
};

struct DemoDeployment {
  DemoUser admin;
  std::vector<DemoUser> doctors;
  std::vector<DemoUser> patients;
  std::string hospital_id;
};

// Registers an admin, a hospital, doctors and patients (each with a password
// and a fresh token), admits patient i to doctor i % doctors and creates
// every patient's record.
DemoDeployment seed_demo(Platform& platform, int doctors = 2, int patients = 4);

// Minimal blocking HTTP server in front of Platform::handle.
class HttpServer {
 public:
  explicit HttpServer(Platform& platform);
  ~HttpServer();

  // Returns the bound port; port 0 picks a free one.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ehr::api
