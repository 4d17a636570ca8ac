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

#include "ehr/ai/generator.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

#include "ehr/core/error.hpp"

namespace ehr::ai {
namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(ChatRole role) noexcept {
  switch (role) {
    case ChatRole::system: return "system";
    case ChatRole::user: return "user";
    case ChatRole::assistant: return "assistant";
  }
  return "user";
}

std::string MockGenerator::transform(const std::string& system_role,
                                     const std::vector<ChatMessage>& messages) {
  std::uint64_t h = fnv1a(14695981039346656037ULL, system_role);
  const ChatMessage* last_user = nullptr;
  for (const auto& m : messages) {
    h = fnv1a(h, "\x1f");
    h = fnv1a(h, to_string(m.role));
    h = fnv1a(h, "\x1e");
    h = fnv1a(h, m.content);
    if (m.role == ChatRole::user) last_user = &m;
  }
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(h));

  std::ostringstream out;
  out << "[mock " << digest << "] turns=" << messages.size() << "\n";
  if (last_user) {
    std::istringstream lines(last_user->content);
    std::string line;
    int n = 0;
    while (std::getline(lines, line) && n < 60) {
      if (line.empty()) continue;
      out << "> " << line << "\n";
      ++n;
    }
  }
  return out.str();
}

std::string MockGenerator::generate(const std::string& system_role,
                                    const std::vector<ChatMessage>& messages) {
  {
    std::lock_guard lock(mu_);
    if (!available_) throw Error(ErrorKind::upstream_error, "generator unavailable");
    calls_.push_back({system_role, messages});
  }
  return transform(system_role, messages);
}

void MockGenerator::set_available(bool available) {
  std::lock_guard lock(mu_);
  available_ = available;
}

std::vector<GeneratorCall> MockGenerator::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::size_t MockGenerator::call_count() const {
  std::lock_guard lock(mu_);
  return calls_.size();
}

}  // namespace ehr::ai
