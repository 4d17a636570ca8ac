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

#include <optional>
#include <string>
#include <string_view>

#include "ehr/ai/image.hpp"

namespace ehr::ai {

enum class XrayLabel { Pneumonia, Normal };

std::string_view to_string(XrayLabel label) noexcept;
std::optional<XrayLabel> xray_label_from_string(std::string_view name) noexcept;

struct Classification {
  XrayLabel label = XrayLabel::Normal;
  double confidence = 0;
};

class ClassifierClient {
 public:
  virtual ~ClassifierClient() = default;
  virtual Classification classify(const ImageTensor& image) = 0;
};

// Fixture stand-in. Upload names containing "pneumonia" or "normal" decide the
// label; otherwise mean intensity does (consolidated lungs image brighter).
// Confidence is fixed per class.
class MockClassifier final : public ClassifierClient {
 public:
  static constexpr double kPneumoniaConfidence = 0.92;
  static constexpr double kNormalConfidence = 0.97;

  Classification classify(const ImageTensor& image) override;
};

}  // namespace ehr::ai
