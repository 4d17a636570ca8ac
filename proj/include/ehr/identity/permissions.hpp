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

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace ehr::identity {

enum class Role { patient, doctor, admin, service };

std::string_view to_string(Role role) noexcept;
std::optional<Role> role_from_string(std::string_view name) noexcept;

// Doctor grant, in the order the identity provider lists them.
inline constexpr std::array<std::string_view, 18> kDoctorPermissions = {
    "createAllergy",    "createCondition", "createMedication", "createRecord",
    "createSurgery",    "createVisit",     "deleteAllergy",    "deleteCondition",
    "deleteMedication", "deleteSurgery",   "deleteVisit",      "getRecord",
    "getVisit",         "updateAllergy",   "updateCondition",  "updateMedication",
    "updateSurgery",    "updateVisit",
};

inline constexpr std::array<std::string_view, 3> kPatientPermissions = {
    "getOwnRecord", "requestDataAddition", "requestExamination"};

// Admins manage users and admissions; no clinical-data permission.
inline constexpr std::array<std::string_view, 4> kAdminPermissions = {
    "admitPatient", "dischargePatient", "registerPatient", "registerDoctor"};

// Every permission a token may carry.
bool is_known_permission(std::string_view name) noexcept;

// Pure role -> permission mapping. Service principals get none; they carry
// scopes instead.
const std::set<std::string>& permissions_for(Role role);

// Scopes a service credential may be granted.
namespace scope {
inline constexpr std::string_view kRecordRead = "record:read";
inline constexpr std::string_view kRecordWrite = "record:write";
inline constexpr std::string_view kReportWrite = "report:write";
inline constexpr std::string_view kAuditRead = "audit:read";
}  // namespace scope

}  // namespace ehr::identity
