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

#include <fstream>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "support/world.hpp"

namespace ehr::api {
namespace {

using test::body_of;
using test::World;
using json = nlohmann::json;

class ApiTest : public ::testing::Test {
 protected:
  World w{2, 4};

  gateway::HttpResponse call(const std::string& m, const std::string& path,
                             const std::string& token = {}, const json& body = nullptr) {
    return w.call(m, path, token, body);
  }
};

TEST_F(ApiTest, SelfRegisterLoginAndProfile) {
  auto reg = call("POST", "/auth/register",
                  {}, {{"national_id", "30001010000001"}, {"name", "Self Made"}, {"password", "pw-1-long-enough"}});
  ASSERT_EQ(reg.status, 201) << reg.body;
  const auto id = body_of(reg)["patient_id"].get<std::string>();

  EXPECT_EQ(call("POST", "/auth/login", {}, {{"username", id}, {"password", "wrong"}}).status, 401);
  auto login = call("POST", "/auth/login", {}, {{"username", id}, {"password", "pw-1-long-enough"}});
  ASSERT_EQ(login.status, 200) << login.body;
  EXPECT_EQ(body_of(login)["token_type"], "Bearer");
  const auto token = body_of(login)["access_token"].get<std::string>();

  auto profile = call("GET", "/api/user/profile", token);
  ASSERT_EQ(profile.status, 200);
  EXPECT_EQ(body_of(profile)["patient_id"], id);
  EXPECT_EQ(body_of(profile)["name"], "Self Made");

  EXPECT_EQ(call("GET", "/api/user/profile").status, 401);
  EXPECT_EQ(call("GET", "/api/user/profile", "not-a-token").status, 401);
  EXPECT_EQ(call("POST", "/auth/register", {}, {{"name", "No Id"}, {"password", "x"}}).status, 422);
  EXPECT_EQ(call("GET", "/auth/login").status, 404);
}

TEST_F(ApiTest, ServiceTokenGrant) {
  const auto& o = w.platform.options();
  auto ok = call("POST", "/auth/token", {},
                 {{"client_id", o.ai_client_id}, {"client_secret", o.ai_client_secret},
                  {"scope", "record:read"}});
  ASSERT_EQ(ok.status, 200) << ok.body;
  const auto claims = w.claims(body_of(ok)["access_token"]);
  EXPECT_EQ(claims.scopes, std::set<std::string>{"record:read"});
  EXPECT_EQ(call("POST", "/auth/token", {},
                 {{"client_id", o.ai_client_id}, {"client_secret", "nope"}})
                .status,
            401);
  EXPECT_EQ(call("POST", "/auth/token", {},
                 {{"client_id", o.ai_client_id}, {"client_secret", o.ai_client_secret},
                  {"scope", "audit:read"}})
                .status,
            403);
}

TEST_F(ApiTest, AdminRegistersDoctorAndPatient) {
  auto doc = call("POST", "/api/doctors", w.admin(),
                  {{"name", "Dr. New"}, {"specialty", "Cardiology"},
                   {"hospital_ids", {w.demo.hospital_id}}, {"password", "doctor-pw-1"}});
  ASSERT_EQ(doc.status, 201) << doc.body;
  auto pat = call("POST", "/api/patients", w.admin(),
                  {{"national_id", "30001010000002"}, {"name", "New Patient"}});
  ASSERT_EQ(pat.status, 201);
  EXPECT_EQ(call("POST", "/api/patients", w.admin(),
                 {{"national_id", "30001010000002"}, {"name", "Again"}})
                .status,
            409);
  EXPECT_EQ(call("POST", "/api/patients", w.doctor(0),
                 {{"national_id", "30001010000003"}, {"name", "Nope"}})
                .status,
            403);
  EXPECT_EQ(call("POST", "/api/doctors", w.admin(), {{"name", "Dr. X"}, {"hospital_ids", "h"}}).status,
            422);
  auto hospitals = call("GET", "/api/hospitals", w.patient(0));
  ASSERT_EQ(hospitals.status, 200);
  EXPECT_EQ(body_of(hospitals).size(), 1u);
}

// Admit, examine, discharge, then the same doctor is turned away.
TEST_F(ApiTest, AdmissionLifecycleControlsRecordAccess) {
  const auto pid = w.patient_id(0);
  const auto path = "/api/records/" + pid;
  ASSERT_EQ(call("GET", path, w.doctor(0)).status, 200);
  EXPECT_EQ(call("GET", path, w.doctor(1)).status, 403);

  auto adm = call("POST", "/api/admissions", w.admin(),
                  {{"patient_id", pid}, {"doctor_id", w.doctor_id(1)}});
  ASSERT_EQ(adm.status, 201) << adm.body;
  const auto admission = body_of(adm)["admission_id"].get<std::string>();
  EXPECT_EQ(body_of(adm)["state"], "active");
  EXPECT_EQ(call("POST", "/api/admissions", w.admin(),
                 {{"patient_id", pid}, {"doctor_id", w.doctor_id(1)}})
                .status,
            409);

  auto visit = call("POST", path + "/visits", w.doctor(1), test::sample_visit());
  ASSERT_EQ(visit.status, 201) << visit.body;
  auto visits = call("GET", path + "/visits", w.doctor(1));
  ASSERT_EQ(visits.status, 200);
  EXPECT_EQ(body_of(visits).size(), 1u);

  auto listed = call("GET", "/api/admissions?patient_id=" + pid, w.admin());
  ASSERT_EQ(listed.status, 200);
  EXPECT_EQ(body_of(listed).size(), 2u);

  auto dis = call("POST", "/api/admissions/" + admission + "/discharge", w.admin());
  ASSERT_EQ(dis.status, 200) << dis.body;
  EXPECT_EQ(body_of(dis)["state"], "discharged");
  EXPECT_FALSE(body_of(dis)["discharged_at"].is_null());

  auto denied = call("GET", path, w.doctor(1));
  EXPECT_EQ(denied.status, 403);
  EXPECT_EQ(body_of(denied)["error_kind"], "access_denied");
  EXPECT_EQ(body_of(denied)["layer"], "access_control");
  EXPECT_EQ(call("POST", "/api/admissions/" + admission + "/discharge", w.admin()).status, 409);
}

TEST_F(ApiTest, RecordEntityRoutes) {
  const auto path = "/api/records/" + w.patient_id(0);
  auto a = call("POST", path + "/allergies", w.doctor(0),
                {{"allergen", "penicillin"}, {"category", "drug"}, {"severity", "severe"}});
  ASSERT_EQ(a.status, 201) << a.body;
  const auto record = body_of(call("GET", path, w.doctor(0)));
  ASSERT_EQ(record["allergies"].size(), 1u);
  const auto aid = record["allergies"][0]["allergy_id"].get<std::string>();
  EXPECT_EQ(call("PUT", path + "/allergies/" + aid, w.doctor(0),
                 {{"allergen", "penicillin"}, {"category", "drug"}, {"severity", "mild"}})
                .status,
            200);
  EXPECT_EQ(call("PUT", path + "/lifestyle", w.doctor(0), {{"smoking", "never"}, {"alcohol", "none"}, {"exercise", "none"}})
                .status,
            200);
  EXPECT_EQ(call("PUT", path + "/lifestyle", w.doctor(0), {{"smoking", "never"}}).status, 422);
  EXPECT_EQ(call("DELETE", path + "/allergies/" + aid, w.doctor(0)).status, 200);
  EXPECT_EQ(call("DELETE", path + "/allergies/" + aid, w.doctor(0)).status, 404);
  EXPECT_EQ(call("POST", path + "/unicorns", w.doctor(0), json::object()).status, 404);

  auto bad = call("POST", path + "/allergies", w.doctor(0), {{"severity", "extreme"}});
  EXPECT_EQ(bad.status, 422);
  EXPECT_EQ(body_of(bad)["layer"], "validation");
  EXPECT_TRUE(body_of(bad).contains("fields"));

  EXPECT_EQ(call("GET", path, w.patient(0)).status, 200);
  EXPECT_EQ(call("GET", path, w.patient(1)).status, 403);
  EXPECT_EQ(call("POST", path + "/allergies", w.patient(0), {{"allergen", "dust"}}).status, 403);
  EXPECT_EQ(call("POST", "/api/records", w.doctor(0), {{"patient_id", w.patient_id(0)}}).status,
            409);
}

TEST_F(ApiTest, DataAdditionThroughHttp) {
  auto sub = call("POST", "/api/requests/data-addition", w.patient(0),
                  {{"data_type", "prescription"},
                   {"issuance_date", "2023-09-01"},
                   {"document_ref", "doc-ref-1"},
                   {"description", "metformin 500 mg"}});
  ASSERT_EQ(sub.status, 201) << sub.body;
  const auto rid = body_of(sub)["request_id"].get<std::string>();
  const auto base = "/api/requests/data-addition/" + rid;
  // Not yet forwarded to anyone, so no doctor may resolve it.
  EXPECT_EQ(call("POST", base + "/resolve", w.doctor(0), {{"verdict", "approved"}}).status, 403);
  auto fwd = call("POST", base + "/forward", w.admin(), {{"doctor_id", w.doctor_id(0)}});
  ASSERT_EQ(fwd.status, 200) << fwd.body;
  EXPECT_EQ(body_of(fwd)["state"], "forwarded");
  EXPECT_EQ(call("POST", base + "/resolve", w.doctor(1), {{"verdict", "approved"}}).status, 403);
  EXPECT_EQ(call("POST", base + "/resolve", w.doctor(0), {{"verdict", "maybe"}}).status, 422);
  auto ok = call("POST", base + "/resolve", w.doctor(0), {{"verdict", "approved"}});
  ASSERT_EQ(ok.status, 200) << ok.body;
  EXPECT_EQ(body_of(ok)["state"], "approved");

  const auto record = body_of(call("GET", "/api/records/" + w.patient_id(0), w.doctor(0)));
  EXPECT_EQ(record["medications"].size(), 1u);
  auto mine = call("GET", "/api/requests/data-addition", w.patient(0));
  EXPECT_EQ(body_of(mine).size(), 1u);
  EXPECT_EQ(call("POST", "/api/requests/data-addition", w.patient(0),
                 {{"data_type", "tarot"}, {"issuance_date", "2023-09-01"}})
                .status,
            422);
}

TEST_F(ApiTest, ExaminationSchedulingCreatesAdmission) {
  auto req = call("POST", "/api/requests/examination", w.patient(2), {{"requested_type", "xray"}});
  ASSERT_EQ(req.status, 201) << req.body;
  const auto rid = body_of(req)["request_id"].get<std::string>();
  // Patient 2 is admitted to doctor 0 by the seed; doctor 1 has no access yet.
  EXPECT_EQ(call("GET", "/api/records/" + w.patient_id(2), w.doctor(1)).status, 403);
  auto sched = call("POST", "/api/requests/examination/" + rid + "/schedule", w.admin(),
                    {{"doctor_id", w.doctor_id(1)}});
  ASSERT_EQ(sched.status, 200) << sched.body;
  EXPECT_EQ(body_of(sched)["state"], "scheduled");
  EXPECT_EQ(call("GET", "/api/records/" + w.patient_id(2), w.doctor(1)).status, 200);
  EXPECT_EQ(body_of(call("GET", "/api/requests/examination", w.admin())).size(), 1u);
}

TEST_F(ApiTest, EmergencyContacts) {
  auto c = call("POST", "/api/contacts", w.patient(0), {{"name", "Sibling"}, {"phone", "0100"}});
  ASSERT_EQ(c.status, 201) << c.body;
  auto list = call("GET", "/api/contacts", w.patient(0));
  ASSERT_EQ(list.status, 200);
  EXPECT_EQ(body_of(list).size(), 1u);
  EXPECT_EQ(call("GET", "/api/contacts", w.doctor(0)).status, 403);
}

TEST_F(ApiTest, AiEndpoints) {
  const auto pid = w.patient_id(0);
  ASSERT_EQ(call("POST", "/api/records/" + pid + "/visits", w.doctor(0), test::sample_visit()).status,
            201);
  auto sum = call("POST", "/api/ai/summarize/" + pid, w.doctor(0));
  ASSERT_EQ(sum.status, 200) << sum.body;
  EXPECT_FALSE(body_of(sum)["summary_text"].get<std::string>().empty());
  EXPECT_EQ(call("POST", "/api/ai/summarize/" + pid, w.doctor(1)).status, 403);

  const auto visits = body_of(call("GET", "/api/records/" + pid + "/visits", w.doctor(0)));
  const auto vid = visits[0]["visit_id"].get<std::string>();
  auto rep = call("POST", "/api/ai/report/" + pid + "/" + vid, w.doctor(0));
  ASSERT_EQ(rep.status, 201) << rep.body;

  auto chat = call("POST", "/chat/initiate", w.doctor(0), {{"user_input", "dosage of metformin?"}});
  ASSERT_EQ(chat.status, 201) << chat.body;
  const auto cid = body_of(chat)["conversation_id"].get<std::string>();
  EXPECT_EQ(call("POST", "/chat/continue", w.doctor(0),
                 {{"conversation_id", cid}, {"user_input", "and for children?"}})
                .status,
            200);
  auto conv = call("GET", "/chat/" + cid, w.doctor(0));
  ASSERT_EQ(conv.status, 200);
  EXPECT_EQ(call("GET", "/chat/" + cid, w.doctor(1)).status, 403);
  EXPECT_EQ(body_of(call("GET", "/chats", w.doctor(0))).size(), 1u);
  EXPECT_EQ(call("POST", "/chat/initiate", w.patient(0), {{"user_input", "hi"}}).status, 403);
  EXPECT_EQ(call("POST", "/chat/initiate", w.doctor(0),
                 {{"user_input", "hi"}, {"doctor_id", w.doctor_id(1)}})
                .status,
            403);

  gateway::HttpRequest x;
  x.method = "POST";
  x.path = "/api/ai/xray/" + pid;
  x.headers["Authorization"] = "Bearer " + w.doctor(0);
  x.headers["X-Upload-Filename"] = "xray_pneumonia.png";
  x.body = test::read_text(std::filesystem::path(test::source_dir()) / "tests" / "fixtures" /
                           "xray_pneumonia.png");
  auto xr = w.platform.handle(x);
  ASSERT_EQ(xr.status, 201) << xr.body;
  const auto analysis = body_of(xr);
  EXPECT_EQ(analysis["label"], "Pneumonia");
  x.body = "plain text";
  EXPECT_EQ(w.platform.handle(x).status, 422);

  const auto aid = analysis["result_id"].get<std::string>();
  auto review = call("POST", "/api/ai/xray/" + aid + "/review", w.doctor(0),
                     {{"verdict", "confirmed"}});
  EXPECT_EQ(review.status, 200) << review.body;
  EXPECT_EQ(call("POST", "/api/ai/xray/" + aid + "/review", w.doctor(0), {{"verdict", "pending"}})
                .status,
            422);
}

TEST_F(ApiTest, UnknownRoutesAndMalformedBodies) {
  EXPECT_EQ(call("GET", "/api/nothing", w.admin()).status, 404);
  EXPECT_EQ(call("GET", "/api/recordsx", w.admin()).status, 404);
  gateway::HttpRequest r;
  r.method = "POST";
  r.path = "/api/patients";
  r.headers["Authorization"] = "Bearer " + w.admin();
  r.body = "{not json";
  EXPECT_EQ(w.platform.handle(r).status, 422);
}

// The same platform served over a real socket.
TEST(HttpServerTest, ServesOverLoopback) {
  World w{1, 1};
  HttpServer server(w.platform);
  const int port = server.bind("127.0.0.1", 0);
  std::thread t([&] { server.run(); });
  httplib::Client c("127.0.0.1", port);
  for (int i = 0; i < 50 && !c.Get("/auth/login"); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }

  httplib::Headers auth = {{"Authorization", "Bearer " + w.doctor(0)}};
  auto rec = c.Get(("/api/records/" + w.patient_id(0)).c_str(), auth);
  ASSERT_TRUE(rec);
  EXPECT_EQ(rec->status, 200);
  EXPECT_EQ(rec->get_header_value("Content-Type"), "application/json");
  EXPECT_EQ(json::parse(rec->body)["patient_id"], w.patient_id(0));

  auto login = c.Post("/auth/login",
                      json{{"username", w.doctor_id(0)}, {"password", w.demo.doctors[0].password}}.dump(),
                      "application/json");
  ASSERT_TRUE(login);
  EXPECT_EQ(login->status, 200);

  auto missing = c.Get("/api/records/" + w.patient_id(0));
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 401);

  // Multipart upload: the "image" part becomes the request body.
  httplib::MultipartFormDataItems items = {
      {"image",
       test::read_text(std::filesystem::path(test::source_dir()) / "tests" / "fixtures" /
                       "xray_normal.png"),
       "xray_normal.png", "image/png"}};
  auto up = c.Post(("/api/ai/xray/" + w.patient_id(0)).c_str(), auth, items);
  ASSERT_TRUE(up);
  EXPECT_EQ(up->status, 201) << up->body;
  EXPECT_EQ(json::parse(up->body)["label"], "Normal");

  server.stop();
  t.join();
}

}  // namespace
}  // namespace ehr::api
