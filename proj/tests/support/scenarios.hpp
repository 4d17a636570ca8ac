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

#include <string>

#include "ehr/ai/image.hpp"
#include "support/world.hpp"

namespace ehr::test {

inline std::string fixture(const std::string& name) {
  return read_text(std::filesystem::path(source_dir()) / "tests" / "fixtures" / name);
}

// Condition, allergy, medication and lifestyle for patient i, written by
// their admitted doctor.
inline void enrich(World& w, int i) {
  auto& rec = w.platform.records();
  auto put = [&](records::EntityKind k, nlohmann::json body) {
    ASSERT_TRUE(rec.upsert_entity(w.ctx(w.doctor(i), w.patient_id(i), body), k).ok());
  };
  put(records::EntityKind::condition, {{"name", "asthma"}, {"chronic", true}});
  put(records::EntityKind::allergy,
      {{"allergen", "penicillin"}, {"category", "drug"}, {"severity", "severe"}});
  put(records::EntityKind::medication, {{"name", "salbutamol"},
                                        {"dosage", "100 mcg"},
                                        {"frequency", "as needed"},
                                        {"active", true}});
  put(records::EntityKind::lifestyle,
      {{"smoking", "former"}, {"alcohol", "occasional"}, {"exercise", "walks"}});
}

inline std::string add_visit(World& w, int i, nlohmann::json visit = sample_visit()) {
  auto r = w.platform.records().create_visit(w.ctx(w.doctor(i), w.patient_id(i), visit));
  EXPECT_TRUE(r.ok());
  return r.ok() ? (*r.body)["visit_id"].get<std::string>() : std::string();
}

struct GoldenOutputs {
  std::string summary_json;
  std::string report_json;
  std::string report_txt;
  std::string xray_json;
};

// The three AI workflows on a fresh seeded world, each rendered as the bytes
// compared against tests/golden.
inline GoldenOutputs golden_outputs() {
  GoldenOutputs out;
  auto dump = [](const security::PipelineResult& r) {
    return r.ok() ? r.body->dump(2) + "\n" : "failed: " + r.failure->detail;
  };
  {
    World w;
    enrich(w, 0);
    add_visit(w, 0, sample_visit("2023-10-02"));
    out.summary_json =
        dump(w.platform.orchestrator().summarize_history(w.ctx(w.doctor(0), w.patient_id(0))));
  }
  {
    World w;
    enrich(w, 0);
    const auto v = add_visit(w, 0);
    auto r = w.platform.orchestrator().generate_report(w.ctx(w.doctor(0), w.patient_id(0)), v);
    out.report_json = dump(r);
    if (r.ok()) {
      out.report_txt =
          w.platform.blobs().get((*r.body)["storage_ref"].get<std::string>()).value_or("");
    }
  }
  {
    World w;
    out.xray_json = dump(w.platform.orchestrator().classify_xray(
        w.ctx(w.doctor(0), w.patient_id(0)), fixture("xray_pneumonia.png"), ai::ImageFormat::png,
        "xray_pneumonia.png"));
  }
  return out;
}

}  // namespace ehr::test
