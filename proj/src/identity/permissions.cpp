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

#include "ehr/identity/permissions.hpp"

#include <algorithm>

namespace ehr::identity {
namespace {

template <std::size_t N>
std::set<std::string> to_set(const std::array<std::string_view, N>& names) {
  return {names.begin(), names.end()};
}

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& names, std::string_view n) {
  return std::find(names.begin(), names.end(), n) != names.end();
}

}  // namespace

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::patient: return "patient";
    case Role::doctor: return "doctor";
    case Role::admin: return "admin";
    case Role::service: return "service";
  }
  return "patient";
}

std::optional<Role> role_from_string(std::string_view name) noexcept {
  if (name == "patient") return Role::patient;
  if (name == "doctor") return Role::doctor;
  if (name == "admin") return Role::admin;
  if (name == "service") return Role::service;
  return std::nullopt;
}

bool is_known_permission(std::string_view name) noexcept {
  return contains(kDoctorPermissions, name) || contains(kPatientPermissions, name) ||
         contains(kAdminPermissions, name);
}

const std::set<std::string>& permissions_for(Role role) {
  static const std::set<std::string> doctor = to_set(kDoctorPermissions);
  static const std::set<std::string> patient = to_set(kPatientPermissions);
  static const std::set<std::string> admin = to_set(kAdminPermissions);
  static const std::set<std::string> none;
  switch (role) {
    case Role::doctor: return doctor;
    case Role::patient: return patient;
    case Role::admin: return admin;
    case Role::service: return none;
  }
  return none;
}

}  // namespace ehr::identity
