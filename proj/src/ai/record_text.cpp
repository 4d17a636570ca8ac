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

#include "ehr/ai/record_text.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace ehr::ai {
namespace {

using namespace ehr::records;

template <class E>
std::string enum_text(E e) {
  return nlohmann::json(e).get<std::string>();
}

template <class T, class F>
void section(std::ostringstream& out, const char* title, const std::vector<T>& items, F line) {
  out << title << ":\n";
  if (items.empty()) {
    out << "- none recorded\n";
    return;
  }
  for (const auto& item : items) out << "- " << line(item) << "\n";
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string format_measurement(const Measurement& m) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", m.value);
  return std::string(buf) + " " + m.unit;
}

std::string serialize_visit_to_text(const Visit& v) {
  std::string s = v.date + " " + enum_text(v.examination_type) + " visit by " + v.doctor_id +
                  ": diagnosis " + (v.diagnosis.empty() ? "not stated" : v.diagnosis);
  if (!v.complaints.empty()) s += "; complaints " + v.complaints;
  if (!v.symptoms.empty()) s += "; symptoms " + join(v.symptoms, ", ");
  if (!v.treatments.empty()) {
    std::vector<std::string> t;
    for (const auto& tr : v.treatments) t.push_back(tr.name + " (" + tr.dosage + ")");
    s += "; treatments " + join(t, ", ");
  }
  if (!v.vitals.empty()) {
    std::vector<std::string> t;
    for (const auto& [k, m] : v.vitals) t.push_back(k + " " + format_measurement(m));
    s += "; vitals " + join(t, ", ");
  }
  if (!v.notes.empty()) s += "; notes " + v.notes;
  return s;
}

std::string serialize_record_to_text(const ResolvedRecord& r) {
  std::ostringstream out;
  out << "Medical history for patient " << r.record.patient_id << "\n\n";

  section(out, "Conditions", r.conditions, [](const Condition& c) {
    std::string s = c.name + (c.chronic ? " (chronic)" : " (non-chronic)");
    if (c.onset_date) s += ", onset " + *c.onset_date;
    if (!c.notes.empty()) s += "; " + c.notes;
    return s;
  });
  section(out, "Medications", r.medications, [](const Medication& m) {
    std::string s = m.name + " " + m.dosage + ", " + m.frequency;
    s += m.active ? ", active" : ", stopped";
    if (m.start_date) s += ", from " + *m.start_date;
    if (m.end_date) s += " to " + *m.end_date;
    return s;
  });
  section(out, "Allergies", r.allergies, [](const Allergy& a) {
    return a.allergen + " (" + enum_text(a.category) + "), severity " + enum_text(a.severity);
  });
  section(out, "Surgeries", r.surgeries, [](const Surgery& s) {
    std::string t = s.name + " on " + s.date;
    if (!s.outcome.empty()) t += ", outcome: " + s.outcome;
    return t;
  });
  section(out, "Immunizations", r.immunizations,
          [](const Immunization& i) { return i.vaccine + " on " + i.date; });

  std::vector<Lifestyle> lifestyle;
  if (r.record.lifestyle) lifestyle.push_back(*r.record.lifestyle);
  section(out, "Lifestyle", lifestyle, [](const Lifestyle& l) {
    return "smoking " + enum_text(l.smoking) + "; alcohol " + enum_text(l.alcohol) +
           "; exercise " + (l.exercise.empty() ? "not stated" : l.exercise);
  });

  auto visits = r.visits;
  std::sort(visits.begin(), visits.end(), [](const Visit& a, const Visit& b) {
    if (a.date != b.date) return a.date > b.date;
    return a.sequence > b.sequence;
  });
  section(out, "Visits", visits, [](const Visit& v) { return serialize_visit_to_text(v); });
  return out.str();
}

}  // namespace ehr::ai
