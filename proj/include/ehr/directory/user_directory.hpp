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

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ehr/core/clock.hpp"
#include "ehr/core/ids.hpp"
#include "ehr/directory/types.hpp"
#include "ehr/identity/claims.hpp"

namespace ehr::directory {

struct AdmissionFilter {
  enum class Kind { all, by_doctor, by_patient };
  Kind kind = Kind::all;
  std::string id;

  static AdmissionFilter all() { return {}; }
  static AdmissionFilter doctor(std::string id) { return {Kind::by_doctor, std::move(id)}; }
  static AdmissionFilter patient(std::string id) { return {Kind::by_patient, std::move(id)}; }
};

// Invoked when a forwarded doctor approves a data-addition request; must
// create the matching clinical entity. A throw leaves the request forwarded.
using ApprovalSink =
    std::function<void(const DataAdditionRequest& request, const std::string& doctor_id)>;

// Patients, doctors, admins, hospitals, contacts, admissions and the patient
// request queues. Relational in spirit: every admission and request refers to
// registered principals, checked on insert.
class UserDirectory {
 public:
  UserDirectory(const Clock& clock, IdGenerator& ids);

  void set_approval_sink(ApprovalSink sink);

  // Bootstrap seeding (no caller claims; used by deployment setup).
  std::string add_admin(AdminProfile admin);
  std::string add_hospital(Hospital hospital);

  std::string register_patient(const identity::PrincipalClaims& caller, PatientProfile profile);
  // Desk-less self registration; national id required.
  std::string self_register_patient(PatientProfile profile);
  std::string register_doctor(const identity::PrincipalClaims& caller, DoctorProfile profile);

  std::optional<identity::Role> role_of(std::string_view principal_id) const;
  std::optional<PatientProfile> patient(std::string_view id) const;
  std::optional<DoctorProfile> doctor(std::string_view id) const;
  std::optional<AdminProfile> admin(std::string_view id) const;
  nlohmann::json profile(const identity::PrincipalClaims& caller) const;

  Admission admit(const identity::PrincipalClaims& caller, std::string_view patient_id,
                  std::string_view doctor_id);
  Admission discharge(const identity::PrincipalClaims& caller, std::string_view admission_id);
  // Sorted by admitted_at descending.
  std::vector<Admission> list_admissions(const identity::PrincipalClaims& caller,
                                         const AdmissionFilter& filter) const;
  bool has_active_admission(std::string_view doctor_id, std::string_view patient_id) const;
  // Full history, for access-causality checks.
  std::vector<Admission> admission_history() const;

  std::string submit_data_addition_request(const identity::PrincipalClaims& caller,
                                           DataAdditionRequest request);
  DataAdditionRequest forward_request(const identity::PrincipalClaims& caller,
                                      std::string_view request_id, std::string_view doctor_id);
  DataAdditionRequest resolve_request(const identity::PrincipalClaims& caller,
                                      std::string_view request_id, Verdict verdict);
  std::vector<DataAdditionRequest> list_data_requests(
      const identity::PrincipalClaims& caller) const;

  ExaminationRequest request_examination(const identity::PrincipalClaims& caller,
                                         std::string requested_type);
  // Creates the admission and marks the request scheduled in one step.
  ExaminationRequest schedule_examination(const identity::PrincipalClaims& caller,
                                          std::string_view request_id,
                                          std::string_view doctor_id);
  std::vector<ExaminationRequest> list_examination_requests(
      const identity::PrincipalClaims& caller) const;

  std::vector<Hospital> list_hospitals(const identity::PrincipalClaims& caller) const;

  // Set semantics: the same (name, phone) resolves to the same contact and
  // the association is inserted at most once.
  std::string assign_emergency_contact(const identity::PrincipalClaims& caller,
                                       EmergencyContact contact);
  std::vector<EmergencyContact> emergency_contacts(std::string_view patient_id) const;

  std::vector<SystemEvent> events() const;

 private:
  [[noreturn]] void deny(const identity::PrincipalClaims& caller, const std::string& detail) const;
  void record_event(std::string actor, EventKind kind, std::string detail) const;
  Admission admit_locked(const std::string& admin_id, const std::string& patient_id,
                         const std::string& doctor_id);
  void require_authenticated(const identity::PrincipalClaims& caller) const;

  const Clock& clock_;
  IdGenerator& ids_;
  ApprovalSink approval_sink_;

  mutable std::shared_mutex mu_;
  std::map<std::string, PatientProfile, std::less<>> patients_;
  std::map<std::string, std::string, std::less<>> national_ids_;  // national id -> patient
  std::map<std::string, DoctorProfile, std::less<>> doctors_;
  std::map<std::string, AdminProfile, std::less<>> admins_;
  std::map<std::string, Hospital, std::less<>> hospitals_;
  std::map<std::string, EmergencyContact, std::less<>> contacts_;
  std::set<std::pair<std::string, std::string>> patient_contacts_;
  std::map<std::string, Admission, std::less<>> admissions_;
  std::uint64_t admission_seq_ = 0;
  std::map<std::string, DataAdditionRequest, std::less<>> data_requests_;
  std::set<std::string, std::less<>> resolving_;
  std::map<std::string, ExaminationRequest, std::less<>> exam_requests_;

  mutable std::mutex events_mu_;
  mutable std::vector<SystemEvent> events_;
};

}  // namespace ehr::directory
