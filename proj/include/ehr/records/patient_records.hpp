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
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ehr/core/ids.hpp"
#include "ehr/records/types.hpp"
#include "ehr/security/pipeline.hpp"

namespace ehr::records {

enum class EntityKind { allergy, condition, medication, surgery, immunization, lifestyle, visit };

std::string_view to_string(EntityKind kind) noexcept;
std::optional<EntityKind> entity_kind_from_string(std::string_view name) noexcept;

enum class Mutation { create, update, remove };

// Permission a user needs to perform `m` on `kind`. Immunizations and the
// lifestyle singleton are parts of the record root and use createRecord.
std::string required_permission(EntityKind kind, Mutation m);

// A patient-submitted document approved by a doctor.
struct ApprovedDocument {
  std::string patient_id;
  std::string doctor_id;
  std::string data_type;  // test_result | prescription | report | diagnosis | surgery
  std::string issuance_date;
  std::string document_ref;
  std::string description;
};

using PatientExists = std::function<bool(std::string_view)>;
using DoctorName = std::function<std::string(std::string_view)>;
using MutationListener = std::function<void(const std::string& patient_id)>;

// Per-patient aggregate store. Every public clinical operation runs through
// the security pipeline; entities live in their own collections and refer back
// to their record.
class PatientRecords {
 public:
  PatientRecords(security::SecurityPipeline& pipeline, audit::AuditLog& audit,
                 const Clock& clock, IdGenerator& ids, PatientExists patient_exists,
                 DoctorName doctor_name);

  // Each takes ctx.target_patient as the patient id.
  security::PipelineResult create_record(security::RequestContext ctx);
  security::PipelineResult get_record(security::RequestContext ctx);
  security::PipelineResult create_visit(security::RequestContext ctx);
  // Creates when entity_id is empty, otherwise replaces. Lifestyle ignores the
  // id (singleton).
  security::PipelineResult upsert_entity(security::RequestContext ctx, EntityKind kind,
                                         std::optional<std::string> entity_id = std::nullopt);
  security::PipelineResult delete_entity(security::RequestContext ctx, EntityKind kind,
                                         std::string entity_id);
  security::PipelineResult list_visits(security::RequestContext ctx);

  // Trusted in-process reads (no pipeline, no audit).
  std::optional<ResolvedRecord> resolve(std::string_view patient_id) const;
  std::optional<std::uint64_t> version(std::string_view patient_id) const;
  // True iff every id in every record resolves and refers back to it.
  bool referentially_intact() const;

  // Stores the entity implied by an approved data-addition request and
  // writes its audit entry. Returns the new entity id.
  std::string import_approved(const ApprovedDocument& doc);

  void subscribe(MutationListener listener);

 private:
  struct Collections {
    std::map<std::string, MedicalRecord, std::less<>> records;  // by patient id
    std::map<std::string, Condition, std::less<>> conditions;
    std::map<std::string, Medication, std::less<>> medications;
    std::map<std::string, Allergy, std::less<>> allergies;
    std::map<std::string, Surgery, std::less<>> surgeries;
    std::map<std::string, Immunization, std::less<>> immunizations;
    std::map<std::string, Visit, std::less<>> visits;
  };

  MedicalRecord& record_for_write(std::string_view patient_id);
  void touch(MedicalRecord& record);
  ResolvedRecord resolve_locked(const MedicalRecord& record) const;
  std::string add_visit_locked(const std::string& patient_id, Visit visit);
  void notify(const std::string& patient_id);

  template <class T>
  std::string put_entity(std::map<std::string, T, std::less<>>& coll,
                         std::vector<std::string>& ids, std::string T::*id_field,
                         std::string_view kind, const MedicalRecord& record, T value,
                         const std::optional<std::string>& entity_id);

  security::SecurityPipeline& pipeline_;
  audit::AuditLog& audit_;
  const Clock& clock_;
  IdGenerator& ids_;
  PatientExists patient_exists_;
  DoctorName doctor_name_;

  mutable std::shared_mutex mu_;
  Collections data_;
  std::uint64_t visit_seq_ = 0;

  std::shared_mutex listeners_mu_;
  std::vector<MutationListener> listeners_;
};

}  // namespace ehr::records
