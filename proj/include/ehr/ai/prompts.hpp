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

#include <string>

#include <nlohmann/json.hpp>

namespace ehr::ai {

// System-role texts, versioned in config/prompts.json.
struct Prompts {
  int version = 0;
  std::string summarizer;
  std::string chatbot;
  std::string report_recommender;

  static Prompts from_json(const nlohmann::json& document);
  static const Prompts& builtin();
};

}  // namespace ehr::ai
