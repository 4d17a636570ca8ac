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
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace ehr::ai {

enum class ChatRole { system, user, assistant };

std::string_view to_string(ChatRole role) noexcept;

struct ChatMessage {
  ChatRole role = ChatRole::user;
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

// Text generation backend. The system role is passed separately from the
// conversation messages; implementations put it first.
class GeneratorClient {
 public:
  virtual ~GeneratorClient() = default;
  // Throws Error(upstream_error) when the backend cannot answer.
  virtual std::string generate(const std::string& system_role,
                               const std::vector<ChatMessage>& messages) = 0;
};

struct GeneratorCall {
  std::string system_role;
  std::vector<ChatMessage> messages;
};

// Deterministic stand-in: replies with a digest of the full prompt followed by
// an echo of the last user message, so outputs are byte-stable.
class MockGenerator final : public GeneratorClient {
 public:
  std::string generate(const std::string& system_role,
                       const std::vector<ChatMessage>& messages) override;

  void set_available(bool available);
  std::vector<GeneratorCall> calls() const;
  std::size_t call_count() const;

  // The canonical transform, exposed for tests.
  static std::string transform(const std::string& system_role,
                               const std::vector<ChatMessage>& messages);

 private:
  mutable std::mutex mu_;
  bool available_ = true;
  std::vector<GeneratorCall> calls_;
};

struct HttpGeneratorConfig {
  std::string url = "http://127.0.0.1:8000/v1/chat/completions";
  std::string model = "Llama3-OpenBioLLM-70B";
  std::chrono::seconds timeout{60};
  std::string api_key;
};

// Chat-completions style HTTP endpoint: POST {model, messages}; reads
// choices[0].message.content from the reply.
class HttpGeneratorClient final : public GeneratorClient {
 public:
  explicit HttpGeneratorClient(HttpGeneratorConfig config) : config_(std::move(config)) {}
  std::string generate(const std::string& system_role,
                       const std::vector<ChatMessage>& messages) override;

 private:
  HttpGeneratorConfig config_;
};

}  // namespace ehr::ai
