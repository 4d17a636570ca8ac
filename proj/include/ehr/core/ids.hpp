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

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <random>
#include <string>
#include <string_view>

namespace ehr {

// Source of opaque identifiers. Production uses random 96-bit hex ids; tests
// and golden fixtures use a counter so output is reproducible.
class IdGenerator {
 public:
  virtual ~IdGenerator() = default;
  virtual std::string next(std::string_view kind) = 0;
};

class SequentialIds final : public IdGenerator {
 public:
  std::string next(std::string_view kind) override {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06llu",
                  static_cast<unsigned long long>(++counter_));
    return std::string(kind) + "-" + buf;
  }

 private:
  std::atomic<std::uint64_t> counter_{0};
};

class RandomIds final : public IdGenerator {
 public:
  RandomIds() : engine_(std::random_device{}()) {}

  std::string next(std::string_view) override {
    static constexpr char kHex[] = "0123456789abcdef";
    std::lock_guard lock(mu_);
    std::string out(24, '0');
    for (auto& c : out) c = kHex[engine_() & 0xF];
    return out;
  }

 private:
  std::mutex mu_;
  std::mt19937_64 engine_;
};

}  // namespace ehr
