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

// ehr: serve the platform, score summaries, drive load tests.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ehr/api/platform.hpp"
#include "ehr/core/error.hpp"
#include "ehr/load/load.hpp"
#include "ehr/metrics/metrics.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ehr::Error(ehr::ErrorKind::validation_error, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ehr::Error(ehr::ErrorKind::validation_error, "cannot write " + path);
  out << content;
}

std::vector<std::string> read_tokens(const std::string& path) {
  std::vector<std::string> tokens;
  std::istringstream in(read_file(path));
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) tokens.push_back(line);
  }
  return tokens;
}

ehr::api::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string audit_file;
  std::string signing_key;
  int seed_doctors = 0;
  int seed_patients = 0;
  std::string tokens_out;
  std::vector<std::string> trusted_proxies;
  std::string generator_url;
  std::string generator_model;
  int generator_timeout_s = 60;
};

int serve(const ServeArgs& a) {
  ehr::SystemClock clock;
  ehr::RandomIds ids;
  ehr::api::PlatformOptions opts;
  if (!a.signing_key.empty()) opts.signing_key = a.signing_key;
  opts.audit_path = a.audit_file;
  opts.gateway.trusted_proxies = {a.trusted_proxies.begin(), a.trusted_proxies.end()};
  if (!a.generator_url.empty()) {
    ehr::ai::HttpGeneratorConfig g;
    g.url = a.generator_url;
    if (!a.generator_model.empty()) g.model = a.generator_model;
    g.timeout = std::chrono::seconds(a.generator_timeout_s);
    opts.generator = g;
  }
  ehr::api::Platform platform(clock, ids, opts);
  platform.gateway().set_access_log([](const ehr::gateway::AccessLogLine& line) {
    std::clog << ehr::gateway::to_json(line).dump() << "\n";
  });

  if (a.seed_doctors > 0 || a.seed_patients > 0) {
    auto demo = ehr::api::seed_demo(platform, a.seed_doctors, a.seed_patients);
    nlohmann::json j = {{"admin", {{"id", demo.admin.id}, {"password", demo.admin.password}}}};
    for (const auto* group : {&demo.doctors, &demo.patients}) {
      auto& arr = j[group == &demo.doctors ? "doctors" : "patients"];
      arr = nlohmann::json::array();
      for (const auto& u : *group) arr.push_back({{"id", u.id}, {"password", u.password}});
    }
    std::cout << j.dump(2) << std::endl;
    if (!a.tokens_out.empty()) {
      std::string lines;
      for (const auto& u : demo.patients) lines += u.token + "\n";
      for (const auto& u : demo.doctors) lines += u.token + "\n";
      write_file(a.tokens_out, lines);
    }
  }

  ehr::api::HttpServer server(platform);
  const int port = server.bind(a.host, a.port);
  std::cout << "listening on http://" << a.host << ":" << port << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.run();
  g_server = nullptr;
  return 0;
}

struct EvaluateArgs {
  std::string pairs;
  std::string metrics = "rouge1,rouge2,rougeL,semantic";
  std::string out;
  std::string per_pair;
};

int evaluate(const EvaluateArgs& a) {
  const auto metrics = ehr::metrics::parse_metric_list(a.metrics);
  const auto pairs = ehr::metrics::read_pairs_ndjson(read_file(a.pairs));
  ehr::metrics::HashedTrigramProvider provider;
  const auto stats = ehr::metrics::evaluate_corpus(pairs, provider, metrics);
  const auto doc = ehr::metrics::to_json(stats).dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << doc;
  } else {
    write_file(a.out, doc);
  }
  if (!a.per_pair.empty()) write_file(a.per_pair, ehr::metrics::per_pair_ndjson(stats));
  if (stats.excluded > 0) {
    std::cerr << stats.excluded << " pair(s) excluded as undefined\n";
  }
  return 0;
}

struct LoadArgs {
  std::string stages = "60:50,120:50,60:0";
  std::string url;
  std::string token_file;
  double p95 = 500;
  double max_fail = 0.01;
  std::string out;
  bool synthetic_ips = false;
  int think_ms = 1000;
};

int loadtest(const LoadArgs& a) {
  auto plan = ehr::load::parse_stages(a.stages);
  plan.think_time = std::chrono::milliseconds(a.think_ms);
  ehr::load::HttpTarget target;
  target.url = a.url;
  if (!a.token_file.empty()) target.tokens = read_tokens(a.token_file);
  target.synthetic_client_ips = a.synthetic_ips;
  ehr::load::preflight(target);

  const auto report = ehr::load::run_scenario(plan, ehr::load::http_factory(target));
  const auto result = ehr::load::check_thresholds(report, {a.p95, a.max_fail});
  if (!a.out.empty()) write_file(a.out, ehr::load::report_ndjson(report, &result));

  auto summary = ehr::load::to_json(report.stats());
  summary["thresholds_passed"] = result.passed;
  summary["violations"] = result.violations;
  std::cout << summary.dump(2) << std::endl;
  return result.passed ? 0 : 3;
}

struct TokenArgs {
  std::string url = "http://127.0.0.1:8080";
  std::string username;
  std::string password;
  std::string client_id;
  std::string client_secret;
  std::string scope;
};

int token(const TokenArgs& a) {
  httplib::Client client(a.url);
  nlohmann::json body;
  std::string path;
  if (!a.client_id.empty()) {
    path = "/auth/token";
    body = {{"client_id", a.client_id}, {"client_secret", a.client_secret}, {"scope", a.scope}};
  } else {
    path = "/auth/login";
    body = {{"username", a.username}, {"password", a.password}};
  }
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) throw ehr::Error(ehr::ErrorKind::upstream_error, "cannot reach " + a.url);
  if (res->status != 200) {
    std::cerr << res->body << "\n";
    return 1;
  }
  std::cout << nlohmann::json::parse(res->body).at("access_token").get<std::string>() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ehr platform tools"};
  app.require_subcommand(1);

  ServeArgs sa;
  auto* s = app.add_subcommand("serve", "run the platform behind its HTTP gateway");
  s->add_option("--host", sa.host);
  s->add_option("--port", sa.port);
  s->add_option("--audit-file", sa.audit_file, "NDJSON file for the audit stream");
  s->add_option("--signing-key", sa.signing_key);
  s->add_option("--seed-doctors", sa.seed_doctors);
  s->add_option("--seed-patients", sa.seed_patients);
  s->add_option("--tokens-out", sa.tokens_out, "write seeded user tokens, one per line");
  s->add_option("--trusted-proxy", sa.trusted_proxies, "peer whose X-Forwarded-For is believed");
  s->add_option("--generator-url", sa.generator_url, "chat-completions endpoint; mock if unset");
  s->add_option("--generator-model", sa.generator_model);
  s->add_option("--generator-timeout", sa.generator_timeout_s, "seconds");

  EvaluateArgs ea;
  auto* e = app.add_subcommand("evaluate", "score generated summaries against references");
  e->add_option("--pairs", ea.pairs, "NDJSON with reference and generated fields")->required();
  e->add_option("--metrics", ea.metrics);
  e->add_option("--out", ea.out, "stats document (stdout when omitted)");
  e->add_option("--per-pair", ea.per_pair, "per-pair score table (NDJSON)");

  LoadArgs la;
  auto* l = app.add_subcommand("loadtest", "staged virtual-user load test");
  l->add_option("--stages", la.stages, "seconds:vus,...");
  l->add_option("--url", la.url)->required();
  l->add_option("--token", la.token_file, "file with bearer tokens, one per line");
  l->add_option("--p95", la.p95, "p95 threshold in ms");
  l->add_option("--max-fail", la.max_fail, "maximum failure rate");
  l->add_option("--out", la.out, "NDJSON report");
  l->add_flag("--synthetic-ips", la.synthetic_ips, "send a per-VU X-Forwarded-For");
  l->add_option("--think-ms", la.think_ms);

  TokenArgs ta;
  auto* t = app.add_subcommand("token", "obtain a bearer token from a running server");
  t->add_option("--url", ta.url);
  t->add_option("--username", ta.username);
  t->add_option("--password", ta.password);
  t->add_option("--client-id", ta.client_id);
  t->add_option("--client-secret", ta.client_secret);
  t->add_option("--scope", ta.scope, "space-separated scopes");

  CLI11_PARSE(app, argc, argv);
  try {
    if (s->parsed()) return serve(sa);
    if (e->parsed()) return evaluate(ea);
    if (l->parsed()) return loadtest(la);
    if (t->parsed()) return token(ta);
  } catch (const ehr::Error& err) {
    std::cerr << "error: " << ehr::to_string(err.kind()) << ": " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
