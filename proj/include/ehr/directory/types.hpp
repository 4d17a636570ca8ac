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

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ehr/core/clock.hpp"

namespace ehr::directory {

struct PatientProfile {
  std::string patient_id;
  std::string national_id;  // exactly 14 decimal digits
  std::string name;
  std::string contact;
  Timestamp registered_at{};
};

struct DoctorProfile {
  std::string doctor_id;
  std::string name;
  std::string specialty;
  std::set<std::string> hospital_ids;
};

struct AdminProfile {
  std::string admin_id;
  std::string name;
};

struct Hospital {
  std::string hospital_id;
  std::string name;
  std::string region;
};

struct EmergencyContact {
  std::string contact_id;
  std::string name;
  std::string phone;
};

enum class AdmissionState { active, discharged };

struct Admission {
  std::string admission_id;
  std::string patient_id;
  std::string doctor_id;
  std::string admitted_by;
  AdmissionState state = AdmissionState::active;
  Timestamp admitted_at{};
  std::optional<Timestamp> discharged_at;
  std::uint64_t sequence = 0;  // insertion order, breaks admitted_at ties
};

enum class DataType { test_result, prescription, report, diagnosis, surgery };
enum class RequestState { submitted, forwarded, approved, rejected };
enum class Verdict { approved, rejected };

struct DataAdditionRequest {
  std::string request_id;
  std::string patient_id;
  DataType data_type = DataType::test_result;
  std::chrono::year_month_day issuance_date{};
  std::string document_ref;
  std::string description;
  RequestState state = RequestState::submitted;
  std::optional<std::string> reviewing_doctor;
};

enum class ExaminationState { pending, scheduled, closed };

struct ExaminationRequest {
  std::string request_id;
  std::string patient_id;
  std::string requested_type;
  ExaminationState state = ExaminationState::pending;
  std::optional<std::string> resulting_admission;
  Timestamp requested_at{};
};

enum class EventKind { access_attempt, assignment, registration, discharge };

struct SystemEvent {
  std::string event_id;
  std::string actor_id;
  EventKind event_kind = EventKind::registration;
  std::string detail;
  Timestamp at{};
};

std::string_view to_string(AdmissionState s) noexcept;
std::string_view to_string(DataType t) noexcept;
std::string_view to_string(RequestState s) noexcept;
std::string_view to_string(ExaminationState s) noexcept;
std::string_view to_string(EventKind k) noexcept;
std::optional<DataType> data_type_from_string(std::string_view s) noexcept;

bool is_valid_national_id(std::string_view id) noexcept;

nlohmann::json to_json(const PatientProfile& p);
nlohmann::json to_json(const DoctorProfile& d);
nlohmann::json to_json(const Hospital& h);
nlohmann::json to_json(const EmergencyContact& c);
nlohmann::json to_json(const Admission& a);
nlohmann::json to_json(const DataAdditionRequest& r);
nlohmann::json to_json(const ExaminationRequest& r);
nlohmann::json to_json(const SystemEvent& e);

}  // namespace ehr::directory
