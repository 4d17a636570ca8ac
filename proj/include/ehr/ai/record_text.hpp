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

#include "ehr/records/types.hpp"

namespace ehr::ai {

// Section-ordered plain text: Conditions, Medications, Allergies, Surgeries,
// Immunizations, Lifestyle, Visits (newest first). Empty sections read
// "none recorded". Equal records give byte-identical text.
std::string serialize_record_to_text(const records::ResolvedRecord& record);

// One visit in the same style, used by the report workflow.
std::string serialize_visit_to_text(const records::Visit& visit);

// "72 bpm" style rendering of a measurement.
std::string format_measurement(const records::Measurement& m);

}  // namespace ehr::ai
