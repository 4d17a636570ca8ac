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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ehr/core/clock.hpp"

namespace ehr::records {

// Dates are carried as validated "YYYY-MM-DD" strings.

enum class AllergyCategory { drug, food, environmental };
enum class Severity { mild, moderate, severe };
enum class Smoking { never, former, current };
enum class Alcohol { none, occasional, regular };
enum class ExaminationType { routine, follow_up, emergency };
enum class AttachmentKind { lab_result, xray_image, report };

NLOHMANN_JSON_SERIALIZE_ENUM(AllergyCategory, {{AllergyCategory::drug, "drug"},
                                               {AllergyCategory::food, "food"},
                                               {AllergyCategory::environmental, "environmental"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Severity, {{Severity::mild, "mild"},
                                        {Severity::moderate, "moderate"},
                                        {Severity::severe, "severe"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Smoking, {{Smoking::never, "never"},
                                       {Smoking::former, "former"},
                                       {Smoking::current, "current"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Alcohol, {{Alcohol::none, "none"},
                                       {Alcohol::occasional, "occasional"},
                                       {Alcohol::regular, "regular"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ExaminationType, {{ExaminationType::routine, "routine"},
                                               {ExaminationType::follow_up, "follow_up"},
                                               {ExaminationType::emergency, "emergency"}})
NLOHMANN_JSON_SERIALIZE_ENUM(AttachmentKind, {{AttachmentKind::lab_result, "lab_result"},
                                              {AttachmentKind::xray_image, "xray_image"},
                                              {AttachmentKind::report, "report"}})

struct Condition {
  std::string condition_id;
  std::string record_id;
  std::string name;
  bool chronic = false;
  std::optional<std::string> onset_date;
  std::string notes;
  bool operator==(const Condition&) const = default;
};

struct Medication {
  std::string medication_id;
  std::string record_id;
  std::string name;
  std::string dosage;
  std::string frequency;
  bool active = true;
  std::optional<std::string> start_date;
  std::optional<std::string> end_date;  // absent while active
  bool operator==(const Medication&) const = default;
};

struct Allergy {
  std::string allergy_id;
  std::string record_id;
  std::string allergen;
  AllergyCategory category = AllergyCategory::drug;
  Severity severity = Severity::mild;
  bool operator==(const Allergy&) const = default;
};

struct Surgery {
  std::string surgery_id;
  std::string record_id;
  std::string name;
  std::string date;
  std::string outcome;
  bool operator==(const Surgery&) const = default;
};

struct Immunization {
  std::string immunization_id;
  std::string record_id;
  std::string vaccine;
  std::string date;
  bool operator==(const Immunization&) const = default;
};

struct Lifestyle {
  Smoking smoking = Smoking::never;
  Alcohol alcohol = Alcohol::none;
  std::string exercise;
  bool operator==(const Lifestyle&) const = default;
};

struct Treatment {
  std::string name;
  std::string dosage;
  bool operator==(const Treatment&) const = default;
};

struct Measurement {
  double value = 0;
  std::string unit;
  bool operator==(const Measurement&) const = default;
};

struct Attachment {
  AttachmentKind kind = AttachmentKind::lab_result;
  std::string storage_ref;
  bool operator==(const Attachment&) const = default;
};

struct Visit {
  std::string visit_id;
  std::string record_id;
  ExaminationType examination_type = ExaminationType::routine;
  std::string date;
  std::string doctor_id;
  std::string complaints;
  std::vector<std::string> symptoms;
  std::string diagnosis;
  std::vector<Treatment> treatments;
  std::string notes;
  std::map<std::string, Measurement> vitals;
  std::vector<Attachment> attachments;
  std::uint64_t sequence = 0;  // creation order, breaks same-date ties
  bool operator==(const Visit&) const = default;
};

// Aggregate root: one per patient, referencing entity collections by id.
struct MedicalRecord {
  std::string record_id;
  std::string patient_id;
  std::vector<std::string> condition_ids;
  std::vector<std::string> medication_ids;
  std::vector<std::string> allergy_ids;
  std::vector<std::string> surgery_ids;
  std::vector<std::string> immunization_ids;
  std::optional<Lifestyle> lifestyle;
  std::optional<Timestamp> lifestyle_updated_at;
  std::vector<std::string> visit_ids;
  Timestamp created_at{};
  Timestamp updated_at{};
  std::uint64_t version = 0;
  bool operator==(const MedicalRecord&) const = default;
};

// The aggregate with every referenced entity resolved, in id-list order.
struct ResolvedRecord {
  MedicalRecord record;
  std::vector<Condition> conditions;
  std::vector<Medication> medications;
  std::vector<Allergy> allergies;
  std::vector<Surgery> surgeries;
  std::vector<Immunization> immunizations;
  std::vector<Visit> visits;
  bool operator==(const ResolvedRecord&) const = default;
};

struct VisitSummary {
  std::string visit_id;
  ExaminationType examination_type;
  std::string date;
  std::string doctor_name;
};

void to_json(nlohmann::json& j, const Condition& v);
void from_json(const nlohmann::json& j, Condition& v);
void to_json(nlohmann::json& j, const Medication& v);
void from_json(const nlohmann::json& j, Medication& v);
void to_json(nlohmann::json& j, const Allergy& v);
void from_json(const nlohmann::json& j, Allergy& v);
void to_json(nlohmann::json& j, const Surgery& v);
void from_json(const nlohmann::json& j, Surgery& v);
void to_json(nlohmann::json& j, const Immunization& v);
void from_json(const nlohmann::json& j, Immunization& v);
void to_json(nlohmann::json& j, const Lifestyle& v);
void from_json(const nlohmann::json& j, Lifestyle& v);
void to_json(nlohmann::json& j, const Treatment& v);
void from_json(const nlohmann::json& j, Treatment& v);
void to_json(nlohmann::json& j, const Measurement& v);
void from_json(const nlohmann::json& j, Measurement& v);
void to_json(nlohmann::json& j, const Attachment& v);
void from_json(const nlohmann::json& j, Attachment& v);
void to_json(nlohmann::json& j, const Visit& v);
void from_json(const nlohmann::json& j, Visit& v);
void to_json(nlohmann::json& j, const MedicalRecord& v);
void from_json(const nlohmann::json& j, MedicalRecord& v);
void to_json(nlohmann::json& j, const ResolvedRecord& v);
void from_json(const nlohmann::json& j, ResolvedRecord& v);
void to_json(nlohmann::json& j, const VisitSummary& v);

}  // namespace ehr::records
