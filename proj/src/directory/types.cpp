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

#include "ehr/directory/types.hpp"

#include <algorithm>
#include <cctype>

#include "ehr/core/time_format.hpp"

namespace ehr::directory {

std::string_view to_string(AdmissionState s) noexcept {
  return s == AdmissionState::active ? "active" : "discharged";
}

std::string_view to_string(DataType t) noexcept {
  switch (t) {
    case DataType::test_result: return "test_result";
    case DataType::prescription: return "prescription";
    case DataType::report: return "report";
    case DataType::diagnosis: return "diagnosis";
    case DataType::surgery: return "surgery";
  }
  return "test_result";
}

std::string_view to_string(RequestState s) noexcept {
  switch (s) {
    case RequestState::submitted: return "submitted";
    case RequestState::forwarded: return "forwarded";
    case RequestState::approved: return "approved";
    case RequestState::rejected: return "rejected";
  }
  return "submitted";
}

std::string_view to_string(ExaminationState s) noexcept {
  switch (s) {
    case ExaminationState::pending: return "pending";
    case ExaminationState::scheduled: return "scheduled";
    case ExaminationState::closed: return "closed";
  }
  return "pending";
}

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::access_attempt: return "access_attempt";
    case EventKind::assignment: return "assignment";
    case EventKind::registration: return "registration";
    case EventKind::discharge: return "discharge";
  }
  return "registration";
}

std::optional<DataType> data_type_from_string(std::string_view s) noexcept {
  for (auto t : {DataType::test_result, DataType::prescription, DataType::report,
                 DataType::diagnosis, DataType::surgery}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

bool is_valid_national_id(std::string_view id) noexcept {
  return id.size() == 14 && std::all_of(id.begin(), id.end(), [](char c) {
           return std::isdigit(static_cast<unsigned char>(c)) != 0;
         });
}

nlohmann::json to_json(const PatientProfile& p) {
  return {{"patient_id", p.patient_id},
          {"national_id", p.national_id},
          {"name", p.name},
          {"contact", p.contact},
          {"registered_at", format_iso8601(p.registered_at)}};
}

nlohmann::json to_json(const DoctorProfile& d) {
  return {{"doctor_id", d.doctor_id},
          {"name", d.name},
          {"specialty", d.specialty},
          {"hospital_ids", d.hospital_ids}};
}

nlohmann::json to_json(const Hospital& h) {
  return {{"hospital_id", h.hospital_id}, {"name", h.name}, {"region", h.region}};
}

nlohmann::json to_json(const EmergencyContact& c) {
  return {{"contact_id", c.contact_id}, {"name", c.name}, {"phone", c.phone}};
}

nlohmann::json to_json(const Admission& a) {
  nlohmann::json j = {{"admission_id", a.admission_id},
                      {"patient_id", a.patient_id},
                      {"doctor_id", a.doctor_id},
                      {"admitted_by", a.admitted_by},
                      {"state", to_string(a.state)},
                      {"admitted_at", format_iso8601(a.admitted_at)},
                      {"discharged_at", nullptr}};
  if (a.discharged_at) j["discharged_at"] = format_iso8601(*a.discharged_at);
  return j;
}

nlohmann::json to_json(const DataAdditionRequest& r) {
  nlohmann::json j = {{"request_id", r.request_id},
                      {"patient_id", r.patient_id},
                      {"data_type", to_string(r.data_type)},
                      {"issuance_date", format_date(r.issuance_date)},
                      {"document_ref", r.document_ref},
                      {"description", r.description},
                      {"state", to_string(r.state)},
                      {"reviewing_doctor", nullptr}};
  if (r.reviewing_doctor) j["reviewing_doctor"] = *r.reviewing_doctor;
  return j;
}

nlohmann::json to_json(const ExaminationRequest& r) {
  nlohmann::json j = {{"request_id", r.request_id},
                      {"patient_id", r.patient_id},
                      {"requested_type", r.requested_type},
                      {"state", to_string(r.state)},
                      {"requested_at", format_iso8601(r.requested_at)},
                      {"resulting_admission", nullptr}};
  if (r.resulting_admission) j["resulting_admission"] = *r.resulting_admission;
  return j;
}

nlohmann::json to_json(const SystemEvent& e) {
  return {{"event_id", e.event_id},
          {"actor_id", e.actor_id},
          {"event_kind", to_string(e.event_kind)},
          {"detail", e.detail},
          {"at", format_iso8601(e.at)}};
}

}  // namespace ehr::directory
