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

#include "ehr/ai/prompts.hpp"

#include "ehr/core/error.hpp"
#include "ehr_generated/embedded_config.hpp"

namespace ehr::ai {

Prompts Prompts::from_json(const nlohmann::json& document) {
  try {
    Prompts p;
    p.version = document.at("version").get<int>();
    p.summarizer = document.at("summarizer").get<std::string>();
    p.chatbot = document.at("chatbot").get<std::string>();
    p.report_recommender = document.at("report_recommender").get<std::string>();
    if (p.summarizer.empty() || p.chatbot.empty() || p.report_recommender.empty()) {
      throw Error(ErrorKind::validation_error, "prompt texts must be nonempty");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::validation_error, std::string("bad prompts document: ") + e.what());
  }
}

const Prompts& Prompts::builtin() {
  static const Prompts p = from_json(nlohmann::json::parse(ehr_generated::kPromptsJson));
  return p;
}

}  // namespace ehr::ai
