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

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "ehr/core/ids.hpp"

namespace ehr::records {

// Attachment bytes (X-rays, lab documents, rendered reports) live here; the
// record stores only the returned storage_ref.
class BlobStore {
 public:
  virtual ~BlobStore() = default;
  virtual std::string put(std::string bytes, std::string_view content_type) = 0;
  virtual std::optional<std::string> get(std::string_view storage_ref) const = 0;
};

class MemoryBlobStore final : public BlobStore {
 public:
  explicit MemoryBlobStore(IdGenerator& ids) : ids_(ids) {}

  std::string put(std::string bytes, std::string_view content_type) override {
    auto ref = "blob://" + ids_.next("blob");
    std::lock_guard lock(mu_);
    blobs_.emplace(ref, Blob{std::move(bytes), std::string(content_type)});
    return ref;
  }

  std::optional<std::string> get(std::string_view storage_ref) const override {
    std::lock_guard lock(mu_);
    auto it = blobs_.find(storage_ref);
    if (it == blobs_.end()) return std::nullopt;
    return it->second.bytes;
  }

 private:
  struct Blob {
    std::string bytes;
    std::string content_type;
  };
  IdGenerator& ids_;
  mutable std::mutex mu_;
  std::map<std::string, Blob, std::less<>> blobs_;
};

}  // namespace ehr::records
