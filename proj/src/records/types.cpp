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

#include "ehr/records/types.hpp"

#include "ehr/core/time_format.hpp"

namespace ehr::records {
namespace {

using nlohmann::json;

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null()) {
    v = j.at(key).get<T>();
  } else {
    v.reset();
  }
}

Timestamp get_time(const json& j, const char* key) {
  if (!j.contains(key)) return Timestamp{};
  return parse_iso8601(j.at(key).get<std::string>()).value_or(Timestamp{});
}

}  // namespace

void to_json(json& j, const Condition& v) {
  j = {{"condition_id", v.condition_id}, {"record_id", v.record_id}, {"name", v.name},
       {"chronic", v.chronic}, {"notes", v.notes}};
  put_optional(j, "onset_date", v.onset_date);
}

void from_json(const json& j, Condition& v) {
  v.condition_id = j.value("condition_id", "");
  v.record_id = j.value("record_id", "");
  v.name = j.at("name").get<std::string>();
  v.chronic = j.at("chronic").get<bool>();
  get_optional(j, "onset_date", v.onset_date);
  v.notes = j.value("notes", "");
}

void to_json(json& j, const Medication& v) {
  j = {{"medication_id", v.medication_id}, {"record_id", v.record_id}, {"name", v.name},
       {"dosage", v.dosage}, {"frequency", v.frequency}, {"active", v.active}};
  put_optional(j, "start_date", v.start_date);
  put_optional(j, "end_date", v.end_date);
}

void from_json(const json& j, Medication& v) {
  v.medication_id = j.value("medication_id", "");
  v.record_id = j.value("record_id", "");
  v.name = j.at("name").get<std::string>();
  v.dosage = j.at("dosage").get<std::string>();
  v.frequency = j.at("frequency").get<std::string>();
  v.active = j.at("active").get<bool>();
  get_optional(j, "start_date", v.start_date);
  get_optional(j, "end_date", v.end_date);
}

void to_json(json& j, const Allergy& v) {
  j = {{"allergy_id", v.allergy_id}, {"record_id", v.record_id}, {"allergen", v.allergen},
       {"category", v.category}, {"severity", v.severity}};
}

void from_json(const json& j, Allergy& v) {
  v.allergy_id = j.value("allergy_id", "");
  v.record_id = j.value("record_id", "");
  v.allergen = j.at("allergen").get<std::string>();
  v.category = j.at("category").get<AllergyCategory>();
  v.severity = j.at("severity").get<Severity>();
}

void to_json(json& j, const Surgery& v) {
  j = {{"surgery_id", v.surgery_id}, {"record_id", v.record_id}, {"name", v.name},
       {"date", v.date}, {"outcome", v.outcome}};
}

void from_json(const json& j, Surgery& v) {
  v.surgery_id = j.value("surgery_id", "");
  v.record_id = j.value("record_id", "");
  v.name = j.at("name").get<std::string>();
  v.date = j.at("date").get<std::string>();
  v.outcome = j.value("outcome", "");
}

void to_json(json& j, const Immunization& v) {
  j = {{"immunization_id", v.immunization_id}, {"record_id", v.record_id},
       {"vaccine", v.vaccine}, {"date", v.date}};
}

void from_json(const json& j, Immunization& v) {
  v.immunization_id = j.value("immunization_id", "");
  v.record_id = j.value("record_id", "");
  v.vaccine = j.at("vaccine").get<std::string>();
  v.date = j.at("date").get<std::string>();
}

void to_json(json& j, const Lifestyle& v) {
  j = {{"smoking", v.smoking}, {"alcohol", v.alcohol}, {"exercise", v.exercise}};
}

void from_json(const json& j, Lifestyle& v) {
  v.smoking = j.at("smoking").get<Smoking>();
  v.alcohol = j.at("alcohol").get<Alcohol>();
  v.exercise = j.at("exercise").get<std::string>();
}

void to_json(json& j, const Treatment& v) { j = {{"name", v.name}, {"dosage", v.dosage}}; }

void from_json(const json& j, Treatment& v) {
  v.name = j.at("name").get<std::string>();
  v.dosage = j.at("dosage").get<std::string>();
}

void to_json(json& j, const Measurement& v) { j = {{"value", v.value}, {"unit", v.unit}}; }

void from_json(const json& j, Measurement& v) {
  v.value = j.at("value").get<double>();
  v.unit = j.at("unit").get<std::string>();
}

void to_json(json& j, const Attachment& v) {
  j = {{"kind", v.kind}, {"storage_ref", v.storage_ref}};
}

void from_json(const json& j, Attachment& v) {
  v.kind = j.at("kind").get<AttachmentKind>();
  v.storage_ref = j.at("storage_ref").get<std::string>();
}

void to_json(json& j, const Visit& v) {
  j = {{"visit_id", v.visit_id},
       {"record_id", v.record_id},
       {"examination_type", v.examination_type},
       {"date", v.date},
       {"doctor_id", v.doctor_id},
       {"complaints", v.complaints},
       {"symptoms", v.symptoms},
       {"diagnosis", v.diagnosis},
       {"treatments", v.treatments},
       {"notes", v.notes},
       {"vitals", v.vitals},
       {"attachments", v.attachments},
       {"sequence", v.sequence}};
}

void from_json(const json& j, Visit& v) {
  v.visit_id = j.value("visit_id", "");
  v.record_id = j.value("record_id", "");
  v.examination_type = j.at("examination_type").get<ExaminationType>();
  v.date = j.at("date").get<std::string>();
  v.doctor_id = j.value("doctor_id", "");
  v.complaints = j.value("complaints", "");
  v.symptoms = j.value("symptoms", std::vector<std::string>{});
  v.diagnosis = j.at("diagnosis").get<std::string>();
  v.treatments = j.value("treatments", std::vector<Treatment>{});
  v.notes = j.value("notes", "");
  v.vitals = j.value("vitals", std::map<std::string, Measurement>{});
  v.attachments = j.value("attachments", std::vector<Attachment>{});
  v.sequence = j.value("sequence", std::uint64_t{0});
}

void to_json(json& j, const MedicalRecord& v) {
  j = {{"record_id", v.record_id},
       {"patient_id", v.patient_id},
       {"condition_ids", v.condition_ids},
       {"medication_ids", v.medication_ids},
       {"allergy_ids", v.allergy_ids},
       {"surgery_ids", v.surgery_ids},
       {"immunization_ids", v.immunization_ids},
       {"lifestyle", nullptr},
       {"visit_ids", v.visit_ids},
       {"created_at", format_iso8601(v.created_at)},
       {"updated_at", format_iso8601(v.updated_at)},
       {"version", v.version}};
  if (v.lifestyle) j["lifestyle"] = *v.lifestyle;
  if (v.lifestyle_updated_at) j["lifestyle_updated_at"] = format_iso8601(*v.lifestyle_updated_at);
}

void from_json(const json& j, MedicalRecord& v) {
  v.record_id = j.at("record_id").get<std::string>();
  v.patient_id = j.at("patient_id").get<std::string>();
  v.condition_ids = j.at("condition_ids").get<std::vector<std::string>>();
  v.medication_ids = j.at("medication_ids").get<std::vector<std::string>>();
  v.allergy_ids = j.at("allergy_ids").get<std::vector<std::string>>();
  v.surgery_ids = j.at("surgery_ids").get<std::vector<std::string>>();
  v.immunization_ids = j.at("immunization_ids").get<std::vector<std::string>>();
  get_optional(j, "lifestyle", v.lifestyle);
  if (j.contains("lifestyle_updated_at")) {
    v.lifestyle_updated_at = get_time(j, "lifestyle_updated_at");
  } else {
    v.lifestyle_updated_at.reset();
  }
  v.visit_ids = j.at("visit_ids").get<std::vector<std::string>>();
  v.created_at = get_time(j, "created_at");
  v.updated_at = get_time(j, "updated_at");
  v.version = j.value("version", std::uint64_t{0});
}

void to_json(json& j, const ResolvedRecord& v) {
  j = json(v.record);
  j["conditions"] = v.conditions;
  j["medications"] = v.medications;
  j["allergies"] = v.allergies;
  j["surgeries"] = v.surgeries;
  j["immunizations"] = v.immunizations;
  j["visits"] = v.visits;
}

void from_json(const json& j, ResolvedRecord& v) {
  v.record = j.get<MedicalRecord>();
  v.conditions = j.at("conditions").get<std::vector<Condition>>();
  v.medications = j.at("medications").get<std::vector<Medication>>();
  v.allergies = j.at("allergies").get<std::vector<Allergy>>();
  v.surgeries = j.at("surgeries").get<std::vector<Surgery>>();
  v.immunizations = j.at("immunizations").get<std::vector<Immunization>>();
  v.visits = j.at("visits").get<std::vector<Visit>>();
}

void to_json(json& j, const VisitSummary& v) {
  j = {{"visit_id", v.visit_id},
       {"examination_type", v.examination_type},
       {"date", v.date},
       {"doctor_name", v.doctor_name}};
}

}  // namespace ehr::records
