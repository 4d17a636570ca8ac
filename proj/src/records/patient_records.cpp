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

#include "ehr/records/patient_records.hpp"

#include <algorithm>
#include <mutex>

#include "ehr/core/time_format.hpp"

namespace ehr::records {

using security::HandlerResult;
using security::OperationSpec;
using security::PipelineResult;
using security::RequestContext;
namespace scope = identity::scope;

namespace {

constexpr std::string_view kRecords = "medical_records";

std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

std::string_view collection_of(EntityKind kind) {
  switch (kind) {
    case EntityKind::allergy: return "allergies";
    case EntityKind::condition: return "conditions";
    case EntityKind::medication: return "medications";
    case EntityKind::surgery: return "surgeries";
    case EntityKind::immunization: return "immunizations";
    case EntityKind::lifestyle: return kRecords;
    case EntityKind::visit: return "visits";
  }
  return kRecords;
}

std::string_view verb(Mutation m) {
  switch (m) {
    case Mutation::create: return "Created";
    case Mutation::update: return "Updated";
    case Mutation::remove: return "Deleted";
  }
  return "Updated";
}

audit::Action action_of(Mutation m) {
  switch (m) {
    case Mutation::create: return audit::Action::CREATE;
    case Mutation::update: return audit::Action::UPDATE;
    case Mutation::remove: return audit::Action::DELETE;
  }
  return audit::Action::UPDATE;
}

const std::string& patient_of(const RequestContext& ctx) { return *ctx.target_patient; }

void erase_id(std::vector<std::string>& ids, std::string_view id) {
  ids.erase(std::remove(ids.begin(), ids.end(), id), ids.end());
}

template <class T>
std::vector<T> gather(const std::map<std::string, T, std::less<>>& coll,
                      const std::vector<std::string>& ids) {
  std::vector<T> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = coll.find(id);
    if (it != coll.end()) out.push_back(it->second);
  }
  return out;
}

template <class T>
bool intact(const std::map<std::string, T, std::less<>>& coll,
            const std::map<std::string, MedicalRecord, std::less<>>& records,
            std::vector<std::string> MedicalRecord::*ids) {
  std::size_t referenced = 0;
  for (const auto& [patient, record] : records) {
    for (const auto& id : record.*ids) {
      auto it = coll.find(id);
      if (it == coll.end() || it->second.record_id != record.record_id) return false;
      ++referenced;
    }
  }
  // No orphans either.
  return referenced == coll.size();
}

}  // namespace

std::string_view to_string(EntityKind kind) noexcept {
  switch (kind) {
    case EntityKind::allergy: return "allergy";
    case EntityKind::condition: return "condition";
    case EntityKind::medication: return "medication";
    case EntityKind::surgery: return "surgery";
    case EntityKind::immunization: return "immunization";
    case EntityKind::lifestyle: return "lifestyle";
    case EntityKind::visit: return "visit";
  }
  return "visit";
}

std::optional<EntityKind> entity_kind_from_string(std::string_view name) noexcept {
  for (auto k : {EntityKind::allergy, EntityKind::condition, EntityKind::medication,
                 EntityKind::surgery, EntityKind::immunization, EntityKind::lifestyle,
                 EntityKind::visit}) {
    if (to_string(k) == name) return k;
  }
  // Plural path segments used by the HTTP surface.
  if (name == "allergies") return EntityKind::allergy;
  if (name == "conditions") return EntityKind::condition;
  if (name == "medications") return EntityKind::medication;
  if (name == "surgeries") return EntityKind::surgery;
  if (name == "immunizations") return EntityKind::immunization;
  if (name == "visits") return EntityKind::visit;
  return std::nullopt;
}

std::string required_permission(EntityKind kind, Mutation m) {
  if (kind == EntityKind::immunization || kind == EntityKind::lifestyle) return "createRecord";
  std::string prefix = m == Mutation::create ? "create" : m == Mutation::update ? "update" : "delete";
  return prefix + capitalized(to_string(kind));
}

PatientRecords::PatientRecords(security::SecurityPipeline& pipeline, audit::AuditLog& audit,
                               const Clock& clock, IdGenerator& ids,
                               PatientExists patient_exists, DoctorName doctor_name)
    : pipeline_(pipeline),
      audit_(audit),
      clock_(clock),
      ids_(ids),
      patient_exists_(std::move(patient_exists)),
      doctor_name_(std::move(doctor_name)) {}

void PatientRecords::subscribe(MutationListener listener) {
  std::unique_lock lock(listeners_mu_);
  listeners_.push_back(std::move(listener));
}

void PatientRecords::notify(const std::string& patient_id) {
  std::shared_lock lock(listeners_mu_);
  for (const auto& l : listeners_) l(patient_id);
}

MedicalRecord& PatientRecords::record_for_write(std::string_view patient_id) {
  auto it = data_.records.find(patient_id);
  if (it == data_.records.end()) {
    throw Error(ErrorKind::not_found, "no medical record for patient");
  }
  return it->second;
}

void PatientRecords::touch(MedicalRecord& record) {
  // Strictly increasing even when the clock does not move between writes.
  record.updated_at = std::max(clock_.now(), record.updated_at + std::chrono::milliseconds(1));
  ++record.version;
}

ResolvedRecord PatientRecords::resolve_locked(const MedicalRecord& record) const {
  ResolvedRecord r;
  r.record = record;
  r.conditions = gather(data_.conditions, record.condition_ids);
  r.medications = gather(data_.medications, record.medication_ids);
  r.allergies = gather(data_.allergies, record.allergy_ids);
  r.surgeries = gather(data_.surgeries, record.surgery_ids);
  r.immunizations = gather(data_.immunizations, record.immunization_ids);
  r.visits = gather(data_.visits, record.visit_ids);
  return r;
}

std::optional<ResolvedRecord> PatientRecords::resolve(std::string_view patient_id) const {
  std::shared_lock lock(mu_);
  auto it = data_.records.find(patient_id);
  if (it == data_.records.end()) return std::nullopt;
  return resolve_locked(it->second);
}

std::optional<std::uint64_t> PatientRecords::version(std::string_view patient_id) const {
  std::shared_lock lock(mu_);
  auto it = data_.records.find(patient_id);
  if (it == data_.records.end()) return std::nullopt;
  return it->second.version;
}

bool PatientRecords::referentially_intact() const {
  std::shared_lock lock(mu_);
  return intact(data_.conditions, data_.records, &MedicalRecord::condition_ids) &&
         intact(data_.medications, data_.records, &MedicalRecord::medication_ids) &&
         intact(data_.allergies, data_.records, &MedicalRecord::allergy_ids) &&
         intact(data_.surgeries, data_.records, &MedicalRecord::surgery_ids) &&
         intact(data_.immunizations, data_.records, &MedicalRecord::immunization_ids) &&
         intact(data_.visits, data_.records, &MedicalRecord::visit_ids);
}

PipelineResult PatientRecords::create_record(RequestContext ctx) {
  static const OperationSpec op{"create_record", {"createRecord"}, "", "empty",
                                audit::Action::CREATE, std::string(kRecords),
                                "Medical Record Created"};
  return pipeline_.process_request(std::move(ctx), op, [this](const RequestContext& c) {
    const auto& patient = patient_of(c);
    if (patient_exists_ && !patient_exists_(patient)) {
      throw Error(ErrorKind::not_found, "unknown patient");
    }
    MedicalRecord copy;
    {
      std::unique_lock lock(mu_);
      if (data_.records.count(patient)) {
        throw Error(ErrorKind::conflict, "patient already has a medical record");
      }
      MedicalRecord record;
      record.record_id = ids_.next("record");
      record.patient_id = patient;
      record.created_at = record.updated_at = clock_.now();
      copy = data_.records.emplace(patient, std::move(record)).first->second;
    }
    notify(patient);
    return HandlerResult{nlohmann::json(copy), copy.record_id};
  });
}

PipelineResult PatientRecords::get_record(RequestContext ctx) {
  static const OperationSpec op{"get_record",          {"getRecord", "getOwnRecord"},
                                std::string(scope::kRecordRead), "empty",
                                audit::Action::VIEW,   std::string(kRecords),
                                "Medical Record Viewed"};
  return pipeline_.process_request(std::move(ctx), op, [this](const RequestContext& c) {
    std::shared_lock lock(mu_);
    auto it = data_.records.find(patient_of(c));
    if (it == data_.records.end()) throw Error(ErrorKind::not_found, "no medical record for patient");
    return HandlerResult{nlohmann::json(resolve_locked(it->second)), it->second.record_id};
  });
}

std::string PatientRecords::add_visit_locked(const std::string& patient_id, Visit visit) {
  auto& record = record_for_write(patient_id);
  visit.visit_id = ids_.next("visit");
  visit.record_id = record.record_id;
  visit.sequence = ++visit_seq_;
  record.visit_ids.push_back(visit.visit_id);
  touch(record);
  auto id = visit.visit_id;
  data_.visits.emplace(id, std::move(visit));
  return id;
}

PipelineResult PatientRecords::create_visit(RequestContext ctx) {
  static const OperationSpec op{"create_visit", {"createVisit"}, "", "visit",
                                audit::Action::CREATE, "visits", "Visit Created"};
  return pipeline_.process_request(std::move(ctx), op, [this](const RequestContext& c) {
    auto visit = c.payload.get<Visit>();
    visit.doctor_id = c.claims->subject;
    const auto& patient = patient_of(c);
    std::string id;
    {
      std::unique_lock lock(mu_);
      id = add_visit_locked(patient, std::move(visit));
    }
    notify(patient);
    return HandlerResult{{{"visit_id", id}}, id};
  });
}

template <class T>
std::string PatientRecords::put_entity(std::map<std::string, T, std::less<>>& coll,
                                       std::vector<std::string>& ids, std::string T::*id_field,
                                       std::string_view kind, const MedicalRecord& record,
                                       T value, const std::optional<std::string>& entity_id) {
  if (entity_id) {
    auto it = coll.find(*entity_id);
    if (it == coll.end() || it->second.record_id != record.record_id) {
      throw Error(ErrorKind::not_found, "unknown " + std::string(kind) + " id");
    }
    value.*id_field = *entity_id;
    value.record_id = record.record_id;
    it->second = std::move(value);
    return *entity_id;
  }
  auto id = ids_.next(kind);
  value.*id_field = id;
  value.record_id = record.record_id;
  coll.emplace(id, std::move(value));
  ids.push_back(id);
  return id;
}

PipelineResult PatientRecords::upsert_entity(RequestContext ctx, EntityKind kind,
                                             std::optional<std::string> entity_id) {
  if (kind == EntityKind::lifestyle) entity_id.reset();
  if (entity_id && entity_id->empty()) entity_id.reset();
  const Mutation m = entity_id || kind == EntityKind::lifestyle ? Mutation::update
                                                                : Mutation::create;
  OperationSpec op;
  op.name = std::string(m == Mutation::create ? "create_" : "update_") +
            std::string(to_string(kind));
  op.permissions = {required_permission(kind, m)};
  op.schema = std::string(to_string(kind));
  op.action = action_of(m);
  op.collection = std::string(collection_of(kind));
  op.reason = capitalized(to_string(kind)) + " " + std::string(verb(m));

  return pipeline_.process_request(std::move(ctx), op, [&](const RequestContext& c) {
    const auto& patient = patient_of(c);
    const auto& p = c.payload;
    std::string id;
    nlohmann::json body;
    {
      std::unique_lock lock(mu_);
      auto& record = record_for_write(patient);
      switch (kind) {
        case EntityKind::allergy:
          id = put_entity(data_.allergies, record.allergy_ids, &Allergy::allergy_id, "allergy",
                          record, p.get<Allergy>(), entity_id);
          body = data_.allergies.at(id);
          break;
        case EntityKind::condition:
          id = put_entity(data_.conditions, record.condition_ids, &Condition::condition_id,
                          "condition", record, p.get<Condition>(), entity_id);
          body = data_.conditions.at(id);
          break;
        case EntityKind::medication:
          id = put_entity(data_.medications, record.medication_ids, &Medication::medication_id,
                          "medication", record, p.get<Medication>(), entity_id);
          body = data_.medications.at(id);
          break;
        case EntityKind::surgery:
          id = put_entity(data_.surgeries, record.surgery_ids, &Surgery::surgery_id, "surgery",
                          record, p.get<Surgery>(), entity_id);
          body = data_.surgeries.at(id);
          break;
        case EntityKind::immunization:
          id = put_entity(data_.immunizations, record.immunization_ids,
                          &Immunization::immunization_id, "immunization", record,
                          p.get<Immunization>(), entity_id);
          body = data_.immunizations.at(id);
          break;
        case EntityKind::lifestyle:
          record.lifestyle = p.get<Lifestyle>();
          record.lifestyle_updated_at = clock_.now();
          id = record.record_id;
          body = *record.lifestyle;
          break;
        case EntityKind::visit: {
          if (!entity_id) throw Error(ErrorKind::validation_error, "visits are created via create_visit");
          auto it = data_.visits.find(*entity_id);
          if (it == data_.visits.end() || it->second.record_id != record.record_id) {
            throw Error(ErrorKind::not_found, "unknown visit id");
          }
          auto visit = p.get<Visit>();
          visit.visit_id = it->second.visit_id;
          visit.record_id = it->second.record_id;
          visit.doctor_id = it->second.doctor_id;
          visit.sequence = it->second.sequence;
          it->second = std::move(visit);
          id = *entity_id;
          body = it->second;
          break;
        }
      }
      touch(record);
    }
    notify(patient);
    return HandlerResult{std::move(body), id};
  });
}

PipelineResult PatientRecords::delete_entity(RequestContext ctx, EntityKind kind,
                                             std::string entity_id) {
  OperationSpec op;
  op.name = "delete_" + std::string(to_string(kind));
  op.permissions = {required_permission(kind, Mutation::remove)};
  op.action = audit::Action::DELETE;
  op.collection = std::string(collection_of(kind));
  op.reason = capitalized(to_string(kind)) + " Deleted";

  return pipeline_.process_request(std::move(ctx), op, [&](const RequestContext& c) {
    const auto& patient = patient_of(c);
    std::string id = entity_id;
    {
      std::unique_lock lock(mu_);
      auto& record = record_for_write(patient);
      auto drop = [&](auto& coll, std::vector<std::string>& ids) {
        auto it = coll.find(entity_id);
        if (it == coll.end() || it->second.record_id != record.record_id) {
          throw Error(ErrorKind::not_found,
                      "unknown " + std::string(to_string(kind)) + " id");
        }
        coll.erase(it);
        erase_id(ids, entity_id);
      };
      switch (kind) {
        case EntityKind::allergy: drop(data_.allergies, record.allergy_ids); break;
        case EntityKind::condition: drop(data_.conditions, record.condition_ids); break;
        case EntityKind::medication: drop(data_.medications, record.medication_ids); break;
        case EntityKind::surgery: drop(data_.surgeries, record.surgery_ids); break;
        case EntityKind::immunization:
          drop(data_.immunizations, record.immunization_ids);
          break;
        case EntityKind::visit: drop(data_.visits, record.visit_ids); break;
        case EntityKind::lifestyle:
          if (!record.lifestyle) throw Error(ErrorKind::not_found, "no lifestyle recorded");
          record.lifestyle.reset();
          record.lifestyle_updated_at = clock_.now();
          id = record.record_id;
          break;
      }
      touch(record);
    }
    notify(patient);
    return HandlerResult{{{"deleted", id}}, id};
  });
}

PipelineResult PatientRecords::list_visits(RequestContext ctx) {
  static const OperationSpec op{"list_visits",         {"getVisit", "getOwnRecord"},
                                std::string(scope::kRecordRead), "empty",
                                audit::Action::VIEW,   "visits",
                                "Visits Listed"};
  return pipeline_.process_request(std::move(ctx), op, [this](const RequestContext& c) {
    std::vector<Visit> visits;
    std::string record_id;
    {
      std::shared_lock lock(mu_);
      auto it = data_.records.find(patient_of(c));
      if (it != data_.records.end()) {
        visits = gather(data_.visits, it->second.visit_ids);
        record_id = it->second.record_id;
      }
    }
    // No record yet simply means no visits.
    std::sort(visits.begin(), visits.end(), [](const Visit& a, const Visit& b) {
      if (a.date != b.date) return a.date > b.date;
      return a.sequence > b.sequence;
    });
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : visits) {
      VisitSummary s{v.visit_id, v.examination_type, v.date,
                     doctor_name_ ? doctor_name_(v.doctor_id) : v.doctor_id};
      out.push_back(s);
    }
    return HandlerResult{std::move(out), record_id};
  });
}

std::string PatientRecords::import_approved(const ApprovedDocument& doc) {
  const std::string description =
      doc.description.empty() ? "Approved " + doc.data_type : doc.description;
  const std::string note = "Imported from approved document " + doc.document_ref;
  std::string id;
  std::string collection;
  {
    std::unique_lock lock(mu_);
    auto it = data_.records.find(doc.patient_id);
    if (it == data_.records.end()) {
      MedicalRecord record;
      record.record_id = ids_.next("record");
      record.patient_id = doc.patient_id;
      record.created_at = record.updated_at = clock_.now();
      it = data_.records.emplace(doc.patient_id, std::move(record)).first;
    }
    auto& record = it->second;
    if (doc.data_type == "diagnosis") {
      Condition cond;
      cond.name = description;
      cond.chronic = false;
      cond.onset_date = doc.issuance_date;
      cond.notes = note;
      id = put_entity(data_.conditions, record.condition_ids, &Condition::condition_id,
                      "condition", record, std::move(cond), std::nullopt);
      collection = "conditions";
    } else if (doc.data_type == "surgery") {
      Surgery s;
      s.name = description;
      s.date = doc.issuance_date;
      s.outcome = note;
      id = put_entity(data_.surgeries, record.surgery_ids, &Surgery::surgery_id, "surgery",
                      record, std::move(s), std::nullopt);
      collection = "surgeries";
    } else if (doc.data_type == "prescription") {
      Medication med;
      med.name = description;
      med.dosage = "as prescribed";
      med.frequency = "as prescribed";
      med.active = true;
      med.start_date = doc.issuance_date;
      id = put_entity(data_.medications, record.medication_ids, &Medication::medication_id,
                      "medication", record, std::move(med), std::nullopt);
      collection = "medications";
    } else if (doc.data_type == "test_result" || doc.data_type == "report") {
      Visit v;
      v.examination_type = ExaminationType::routine;
      v.date = doc.issuance_date;
      v.doctor_id = doc.doctor_id;
      v.diagnosis = description;
      v.notes = note;
      v.attachments.push_back(
          {doc.data_type == "report" ? AttachmentKind::report : AttachmentKind::lab_result,
           doc.document_ref});
      id = add_visit_locked(doc.patient_id, std::move(v));
      collection = "visits";
    } else {
      throw Error(ErrorKind::validation_error, "unknown data type: " + doc.data_type);
    }
    if (collection != "visits") touch(record);
  }

  audit::AuditEntry entry;
  entry.collection_name = collection;
  entry.document_id = id;
  entry.action = audit::Action::CREATE;
  entry.actor_id = doc.doctor_id;
  entry.ip_address = "internal";
  entry.user_agent = "ehr-approval";
  entry.reason = "Approved Data Addition";
  entry.access_type = audit::AccessType::Regular;
  entry.status = audit::Status::Success;
  audit_.append(std::move(entry));

  notify(doc.patient_id);
  return id;
}

}  // namespace ehr::records
