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

#include "ehr/directory/user_directory.hpp"

#include <algorithm>

#include "ehr/core/error.hpp"

namespace ehr::directory {

using identity::PrincipalClaims;
using identity::Role;

UserDirectory::UserDirectory(const Clock& clock, IdGenerator& ids) : clock_(clock), ids_(ids) {}

void UserDirectory::set_approval_sink(ApprovalSink sink) { approval_sink_ = std::move(sink); }

void UserDirectory::record_event(std::string actor, EventKind kind, std::string detail) const {
  SystemEvent e{ids_.next("evt"), std::move(actor), kind, std::move(detail), clock_.now()};
  std::lock_guard lock(events_mu_);
  events_.push_back(std::move(e));
}

void UserDirectory::deny(const PrincipalClaims& caller, const std::string& detail) const {
  record_event(caller.subject.empty() ? "anonymous" : caller.subject, EventKind::access_attempt,
               "denied: " + detail);
  throw Error(ErrorKind::forbidden, "Forbidden: " + detail);
}

void UserDirectory::require_authenticated(const PrincipalClaims& caller) const {
  if (caller.subject.empty()) throw Error(ErrorKind::unauthorized, "Unauthorized");
}

std::string UserDirectory::add_admin(AdminProfile admin) {
  if (admin.admin_id.empty()) admin.admin_id = ids_.next("adm");
  std::unique_lock lock(mu_);
  if (patients_.count(admin.admin_id) || doctors_.count(admin.admin_id) ||
      admins_.count(admin.admin_id)) {
    throw Error(ErrorKind::conflict, "principal id already registered");
  }
  auto id = admin.admin_id;
  admins_.emplace(id, std::move(admin));
  lock.unlock();
  record_event(id, EventKind::registration, "admin registered");
  return id;
}

std::string UserDirectory::add_hospital(Hospital hospital) {
  if (hospital.hospital_id.empty()) hospital.hospital_id = ids_.next("hos");
  std::unique_lock lock(mu_);
  auto id = hospital.hospital_id;
  if (!hospitals_.emplace(id, std::move(hospital)).second) {
    throw Error(ErrorKind::conflict, "hospital already exists");
  }
  return id;
}

std::string UserDirectory::self_register_patient(PatientProfile profile) {
  if (!is_valid_national_id(profile.national_id)) {
    throw Error(ErrorKind::validation_error, "national_id must be exactly 14 digits",
                {"national_id"});
  }
  if (profile.name.empty()) {
    throw Error(ErrorKind::validation_error, "name is required", {"name"});
  }
  if (profile.patient_id.empty()) profile.patient_id = ids_.next("pat");
  profile.registered_at = clock_.now();

  std::unique_lock lock(mu_);
  if (national_ids_.count(profile.national_id)) {
    throw Error(ErrorKind::conflict, "national_id already registered");
  }
  if (patients_.count(profile.patient_id) || doctors_.count(profile.patient_id) ||
      admins_.count(profile.patient_id)) {
    throw Error(ErrorKind::conflict, "principal id already registered");
  }
  auto id = profile.patient_id;
  national_ids_.emplace(profile.national_id, id);
  patients_.emplace(id, std::move(profile));
  lock.unlock();
  return id;
}

std::string UserDirectory::register_patient(const PrincipalClaims& caller,
                                            PatientProfile profile) {
  require_authenticated(caller);
  if (!caller.has_permission("registerPatient")) deny(caller, "registerPatient required");
  auto id = self_register_patient(std::move(profile));
  record_event(caller.subject, EventKind::registration, "patient " + id + " registered");
  return id;
}

std::string UserDirectory::register_doctor(const PrincipalClaims& caller, DoctorProfile profile) {
  require_authenticated(caller);
  if (!caller.has_permission("registerDoctor")) deny(caller, "registerDoctor required");
  if (profile.name.empty()) throw Error(ErrorKind::validation_error, "name is required", {"name"});
  if (profile.doctor_id.empty()) profile.doctor_id = ids_.next("doc");

  std::unique_lock lock(mu_);
  for (const auto& h : profile.hospital_ids) {
    if (!hospitals_.count(h)) throw Error(ErrorKind::not_found, "unknown hospital " + h);
  }
  if (patients_.count(profile.doctor_id) || doctors_.count(profile.doctor_id) ||
      admins_.count(profile.doctor_id)) {
    throw Error(ErrorKind::conflict, "principal id already registered");
  }
  auto id = profile.doctor_id;
  doctors_.emplace(id, std::move(profile));
  lock.unlock();
  record_event(caller.subject, EventKind::registration, "doctor " + id + " registered");
  return id;
}

std::optional<Role> UserDirectory::role_of(std::string_view id) const {
  std::shared_lock lock(mu_);
  if (patients_.count(id)) return Role::patient;
  if (doctors_.count(id)) return Role::doctor;
  if (admins_.count(id)) return Role::admin;
  return std::nullopt;
}

std::optional<PatientProfile> UserDirectory::patient(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = patients_.find(id);
  if (it == patients_.end()) return std::nullopt;
  return it->second;
}

std::optional<DoctorProfile> UserDirectory::doctor(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = doctors_.find(id);
  if (it == doctors_.end()) return std::nullopt;
  return it->second;
}

std::optional<AdminProfile> UserDirectory::admin(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = admins_.find(id);
  if (it == admins_.end()) return std::nullopt;
  return it->second;
}

nlohmann::json UserDirectory::profile(const PrincipalClaims& caller) const {
  require_authenticated(caller);
  if (auto p = patient(caller.subject)) {
    auto j = to_json(*p);
    j["role"] = "patient";
    return j;
  }
  if (auto d = doctor(caller.subject)) {
    auto j = to_json(*d);
    j["role"] = "doctor";
    return j;
  }
  if (auto a = admin(caller.subject)) {
    return {{"admin_id", a->admin_id}, {"name", a->name}, {"role", "admin"}};
  }
  throw Error(ErrorKind::not_found, "no profile for principal");
}

Admission UserDirectory::admit_locked(const std::string& admin_id, const std::string& patient_id,
                                      const std::string& doctor_id) {
  if (!patients_.count(patient_id)) throw Error(ErrorKind::not_found, "unknown patient");
  if (!doctors_.count(doctor_id)) throw Error(ErrorKind::not_found, "unknown doctor");
  for (const auto& [id, a] : admissions_) {
    if (a.state == AdmissionState::active && a.patient_id == patient_id &&
        a.doctor_id == doctor_id) {
      throw Error(ErrorKind::conflict, "an active admission already exists for this pair");
    }
  }
  Admission a;
  a.admission_id = ids_.next("adm");
  a.patient_id = patient_id;
  a.doctor_id = doctor_id;
  a.admitted_by = admin_id;
  a.state = AdmissionState::active;
  a.admitted_at = clock_.now();
  a.sequence = ++admission_seq_;
  admissions_.emplace(a.admission_id, a);
  return a;
}

Admission UserDirectory::admit(const PrincipalClaims& caller, std::string_view patient_id,
                               std::string_view doctor_id) {
  require_authenticated(caller);
  if (!caller.has_permission("admitPatient")) deny(caller, "admitPatient required");
  std::unique_lock lock(mu_);
  auto a = admit_locked(caller.subject, std::string(patient_id), std::string(doctor_id));
  lock.unlock();
  record_event(caller.subject, EventKind::assignment,
               "admitted " + a.patient_id + " to " + a.doctor_id);
  return a;
}

Admission UserDirectory::discharge(const PrincipalClaims& caller, std::string_view admission_id) {
  require_authenticated(caller);
  if (!caller.has_permission("dischargePatient")) deny(caller, "dischargePatient required");
  std::unique_lock lock(mu_);
  auto it = admissions_.find(admission_id);
  if (it == admissions_.end()) throw Error(ErrorKind::not_found, "unknown admission");
  if (it->second.state != AdmissionState::active) {
    throw Error(ErrorKind::conflict, "admission already discharged");
  }
  it->second.state = AdmissionState::discharged;
  it->second.discharged_at = clock_.now();
  for (auto& [id, req] : exam_requests_) {
    if (req.resulting_admission == it->second.admission_id) req.state = ExaminationState::closed;
  }
  Admission out = it->second;
  lock.unlock();
  record_event(caller.subject, EventKind::discharge,
               "discharged " + out.patient_id + " from " + out.doctor_id);
  return out;
}

std::vector<Admission> UserDirectory::list_admissions(const PrincipalClaims& caller,
                                                      const AdmissionFilter& filter) const {
  require_authenticated(caller);
  const bool admin = caller.has_role(Role::admin);
  const bool doctor = caller.has_role(Role::doctor);
  const bool patient = caller.has_role(Role::patient);
  if (!admin && !doctor && !patient) deny(caller, "admissions are not visible to this principal");
  if (!admin) {
    if (filter.kind == AdmissionFilter::Kind::by_doctor &&
        !(doctor && filter.id == caller.subject)) {
      deny(caller, "cannot list another doctor's admissions");
    }
    if (filter.kind == AdmissionFilter::Kind::by_patient && patient &&
        filter.id != caller.subject) {
      deny(caller, "cannot list another patient's admissions");
    }
  }

  std::vector<Admission> out;
  {
    std::shared_lock lock(mu_);
    for (const auto& [id, a] : admissions_) {
      if (filter.kind == AdmissionFilter::Kind::by_doctor && a.doctor_id != filter.id) continue;
      if (filter.kind == AdmissionFilter::Kind::by_patient && a.patient_id != filter.id) continue;
      if (!admin && doctor && a.doctor_id != caller.subject) continue;
      if (!admin && patient && a.patient_id != caller.subject) continue;
      out.push_back(a);
    }
  }
  std::sort(out.begin(), out.end(), [](const Admission& x, const Admission& y) {
    if (x.admitted_at != y.admitted_at) return x.admitted_at > y.admitted_at;
    return x.sequence > y.sequence;
  });
  return out;
}

bool UserDirectory::has_active_admission(std::string_view doctor_id,
                                         std::string_view patient_id) const {
  std::shared_lock lock(mu_);
  return std::any_of(admissions_.begin(), admissions_.end(), [&](const auto& kv) {
    const auto& a = kv.second;
    return a.state == AdmissionState::active && a.doctor_id == doctor_id &&
           a.patient_id == patient_id;
  });
}

std::vector<Admission> UserDirectory::admission_history() const {
  std::shared_lock lock(mu_);
  std::vector<Admission> out;
  for (const auto& [id, a] : admissions_) out.push_back(a);
  std::sort(out.begin(), out.end(),
            [](const Admission& x, const Admission& y) { return x.sequence < y.sequence; });
  return out;
}

std::string UserDirectory::submit_data_addition_request(const PrincipalClaims& caller,
                                                        DataAdditionRequest request) {
  require_authenticated(caller);
  if (!caller.has_role(Role::patient) || !caller.has_permission("requestDataAddition")) {
    deny(caller, "only patients submit data-addition requests");
  }
  if (request.document_ref.empty()) {
    throw Error(ErrorKind::validation_error, "supporting document required", {"document_ref"});
  }
  if (!request.issuance_date.ok()) {
    throw Error(ErrorKind::validation_error, "issuance_date invalid", {"issuance_date"});
  }
  request.request_id = ids_.next("dar");
  request.patient_id = caller.subject;
  request.state = RequestState::submitted;
  request.reviewing_doctor.reset();
  std::unique_lock lock(mu_);
  if (!patients_.count(request.patient_id)) throw Error(ErrorKind::not_found, "unknown patient");
  auto id = request.request_id;
  data_requests_.emplace(id, std::move(request));
  return id;
}

DataAdditionRequest UserDirectory::forward_request(const PrincipalClaims& caller,
                                                   std::string_view request_id,
                                                   std::string_view doctor_id) {
  require_authenticated(caller);
  if (!caller.has_role(Role::admin)) deny(caller, "only administrators forward requests");
  std::unique_lock lock(mu_);
  auto it = data_requests_.find(request_id);
  if (it == data_requests_.end()) throw Error(ErrorKind::not_found, "unknown request");
  if (!doctors_.count(doctor_id)) throw Error(ErrorKind::not_found, "unknown doctor");
  if (it->second.state != RequestState::submitted) {
    throw Error(ErrorKind::conflict, "request is not in submitted state");
  }
  it->second.state = RequestState::forwarded;
  it->second.reviewing_doctor = std::string(doctor_id);
  return it->second;
}

DataAdditionRequest UserDirectory::resolve_request(const PrincipalClaims& caller,
                                                   std::string_view request_id,
                                                   Verdict verdict) {
  require_authenticated(caller);
  if (!caller.has_role(Role::doctor)) deny(caller, "only the forwarded doctor resolves requests");
  DataAdditionRequest snapshot;
  {
    std::unique_lock lock(mu_);
    auto it = data_requests_.find(request_id);
    if (it == data_requests_.end()) throw Error(ErrorKind::not_found, "unknown request");
    if (it->second.reviewing_doctor != caller.subject) {
      lock.unlock();
      deny(caller, "request was not forwarded to this doctor");
    }
    if (it->second.state != RequestState::forwarded || resolving_.count(request_id)) {
      throw Error(ErrorKind::conflict, "request is not awaiting review");
    }
    resolving_.insert(std::string(request_id));
    snapshot = it->second;
  }

  try {
    if (verdict == Verdict::approved && approval_sink_) approval_sink_(snapshot, caller.subject);
  } catch (...) {
    std::unique_lock lock(mu_);
    resolving_.erase(std::string(request_id));
    throw;
  }

  std::unique_lock lock(mu_);
  resolving_.erase(std::string(request_id));
  auto& req = data_requests_.at(std::string(request_id));
  req.state = verdict == Verdict::approved ? RequestState::approved : RequestState::rejected;
  return req;
}

std::vector<DataAdditionRequest> UserDirectory::list_data_requests(
    const PrincipalClaims& caller) const {
  require_authenticated(caller);
  std::shared_lock lock(mu_);
  std::vector<DataAdditionRequest> out;
  for (const auto& [id, r] : data_requests_) {
    if (caller.has_role(Role::admin) ||
        (caller.has_role(Role::patient) && r.patient_id == caller.subject) ||
        (caller.has_role(Role::doctor) && r.reviewing_doctor == caller.subject)) {
      out.push_back(r);
    }
  }
  return out;
}

ExaminationRequest UserDirectory::request_examination(const PrincipalClaims& caller,
                                                      std::string requested_type) {
  require_authenticated(caller);
  if (!caller.has_role(Role::patient) || !caller.has_permission("requestExamination")) {
    deny(caller, "only patients request examinations");
  }
  if (requested_type.empty()) {
    throw Error(ErrorKind::validation_error, "requested_type required", {"requested_type"});
  }
  ExaminationRequest r;
  r.request_id = ids_.next("exr");
  r.patient_id = caller.subject;
  r.requested_type = std::move(requested_type);
  r.state = ExaminationState::pending;
  r.requested_at = clock_.now();
  std::unique_lock lock(mu_);
  if (!patients_.count(r.patient_id)) throw Error(ErrorKind::not_found, "unknown patient");
  exam_requests_.emplace(r.request_id, r);
  return r;
}

ExaminationRequest UserDirectory::schedule_examination(const PrincipalClaims& caller,
                                                       std::string_view request_id,
                                                       std::string_view doctor_id) {
  require_authenticated(caller);
  if (!caller.has_permission("admitPatient")) deny(caller, "admitPatient required");
  std::unique_lock lock(mu_);
  auto it = exam_requests_.find(request_id);
  if (it == exam_requests_.end()) throw Error(ErrorKind::not_found, "unknown request");
  if (it->second.state != ExaminationState::pending) {
    throw Error(ErrorKind::conflict, "examination request already scheduled");
  }
  auto a = admit_locked(caller.subject, it->second.patient_id, std::string(doctor_id));
  it->second.state = ExaminationState::scheduled;
  it->second.resulting_admission = a.admission_id;
  auto out = it->second;
  lock.unlock();
  record_event(caller.subject, EventKind::assignment,
               "admitted " + a.patient_id + " to " + a.doctor_id + " for " + out.request_id);
  return out;
}

std::vector<ExaminationRequest> UserDirectory::list_examination_requests(
    const PrincipalClaims& caller) const {
  require_authenticated(caller);
  std::shared_lock lock(mu_);
  std::vector<ExaminationRequest> out;
  for (const auto& [id, r] : exam_requests_) {
    if (caller.has_role(Role::admin) ||
        (caller.has_role(Role::patient) && r.patient_id == caller.subject)) {
      out.push_back(r);
    }
  }
  return out;
}

std::vector<Hospital> UserDirectory::list_hospitals(const PrincipalClaims& caller) const {
  require_authenticated(caller);
  std::shared_lock lock(mu_);
  std::vector<Hospital> out;
  for (const auto& [id, h] : hospitals_) out.push_back(h);
  return out;
}

std::string UserDirectory::assign_emergency_contact(const PrincipalClaims& caller,
                                                    EmergencyContact contact) {
  require_authenticated(caller);
  if (!caller.has_role(Role::patient)) deny(caller, "only patients assign emergency contacts");
  if (contact.name.empty() || contact.phone.empty()) {
    throw Error(ErrorKind::validation_error, "contact name and phone are required",
                {contact.name.empty() ? "name" : "phone"});
  }
  std::unique_lock lock(mu_);
  if (!patients_.count(caller.subject)) throw Error(ErrorKind::not_found, "unknown patient");
  std::string id;
  for (const auto& [cid, c] : contacts_) {
    if (c.name == contact.name && c.phone == contact.phone) {
      id = cid;
      break;
    }
  }
  if (id.empty()) {
    id = ids_.next("con");
    contact.contact_id = id;
    contacts_.emplace(id, std::move(contact));
  }
  patient_contacts_.emplace(caller.subject, id);
  return id;
}

std::vector<EmergencyContact> UserDirectory::emergency_contacts(std::string_view patient_id) const {
  std::shared_lock lock(mu_);
  std::vector<EmergencyContact> out;
  for (const auto& [pid, cid] : patient_contacts_) {
    if (pid == patient_id) out.push_back(contacts_.at(cid));
  }
  return out;
}

std::vector<SystemEvent> UserDirectory::events() const {
  std::lock_guard lock(events_mu_);
  return events_;
}

}  // namespace ehr::directory
