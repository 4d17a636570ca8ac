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

#include "ehr/ai/classifier.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace ehr::ai {

std::string_view to_string(XrayLabel label) noexcept {
  return label == XrayLabel::Pneumonia ? "Pneumonia" : "Normal";
}

std::optional<XrayLabel> xray_label_from_string(std::string_view name) noexcept {
  if (name == "Pneumonia") return XrayLabel::Pneumonia;
  if (name == "Normal") return XrayLabel::Normal;
  return std::nullopt;
}

Classification MockClassifier::classify(const ImageTensor& image) {
  std::string name = image.source_name;
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  bool pneumonia = false;
  if (name.find("pneumonia") != std::string::npos) {
    pneumonia = true;
  } else if (name.find("normal") != std::string::npos) {
    pneumonia = false;
  } else if (!image.data.empty()) {
    const double mean =
        std::accumulate(image.data.begin(), image.data.end(), 0.0) / image.data.size();
    pneumonia = mean > 0.5;
  }
  return pneumonia ? Classification{XrayLabel::Pneumonia, kPneumoniaConfidence}
                   : Classification{XrayLabel::Normal, kNormalConfidence};
}

}  // namespace ehr::ai
