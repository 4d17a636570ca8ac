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

#include <atomic>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "ehr/core/error.hpp"
#include "ehr/load/load.hpp"

namespace ehr::load {
namespace {

using namespace std::chrono_literals;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::internal;
}

TEST(Percentile, NearestRank) {
  std::vector<double> v;
  for (int i = 1; i <= 20; ++i) v.push_back(i);
  EXPECT_EQ(percentile(v, 0.95), 19);
  EXPECT_EQ(percentile(v, 0.5), 10);
  EXPECT_EQ(percentile(v, 1.0), 20);
  EXPECT_EQ(percentile({7}, 0.01), 7);
  EXPECT_EQ(percentile({3, 1, 2}, 0.5), 2);
  EXPECT_EQ(kind_of([] { percentile({}, 0.5); }), ErrorKind::undefined_input);
  EXPECT_EQ(kind_of([] { percentile({1}, 0); }), ErrorKind::undefined_input);
}

TEST(Stages, ParseAndInterpolate) {
  const auto plan = parse_stages("60:50,120:50,60:0");
  ASSERT_EQ(plan.stages.size(), 3u);
  EXPECT_DOUBLE_EQ(plan.total_seconds(), 240);
  EXPECT_EQ(plan.peak_vus(), 50);
  EXPECT_DOUBLE_EQ(plan.target_at(0), 0);
  EXPECT_DOUBLE_EQ(plan.target_at(30), 25);
  EXPECT_DOUBLE_EQ(plan.target_at(100), 50);
  EXPECT_DOUBLE_EQ(plan.target_at(210), 25);
  EXPECT_DOUBLE_EQ(plan.target_at(999), 0);
  EXPECT_EQ(kind_of([] { parse_stages(""); }), ErrorKind::validation_error);
  EXPECT_EQ(kind_of([] { parse_stages("60"); }), ErrorKind::validation_error);
  EXPECT_EQ(kind_of([] { parse_stages("0:5"); }), ErrorKind::validation_error);
  EXPECT_EQ(kind_of([] { parse_stages("5:-1"); }), ErrorKind::validation_error);
  EXPECT_EQ(kind_of([] { run_scenario(StagePlan{}, [](int) { return [] { return 200; }; }); }),
            ErrorKind::validation_error);
}

LoadReport synthetic(const std::vector<double>& durations, int failures) {
  LoadReport r;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    r.samples.push_back({static_cast<double>(i), durations[i],
                         static_cast<int>(i) < failures ? 500 : 200, 0});
  }
  r.elapsed_s = 1;
  return r;
}

TEST(Thresholds, Boundaries) {
  std::vector<double> d(100, 100.0);
  for (int i = 0; i < 6; ++i) d[i] = 320;
  auto ok = check_thresholds(synthetic(d, 0), {});
  EXPECT_TRUE(ok.passed);
  EXPECT_DOUBLE_EQ(ok.p95_ms, 320);

  for (int i = 0; i < 6; ++i) d[i] = 501;
  auto slow = check_thresholds(synthetic(d, 0), {});
  EXPECT_FALSE(slow.passed);
  EXPECT_EQ(slow.violations, std::vector<std::string>{"p95"});

  std::fill(d.begin(), d.end(), 100.0);
  auto failing = check_thresholds(synthetic(d, 2), {});
  EXPECT_FALSE(failing.passed);
  EXPECT_EQ(failing.violations, std::vector<std::string>{"failure_rate"});
  EXPECT_TRUE(check_thresholds(synthetic(d, 0), {}).passed);

  EXPECT_EQ(kind_of([] { check_thresholds(LoadReport{}, {}); }), ErrorKind::undefined_input);
}

TEST(Report, NdjsonShape) {
  auto r = synthetic({10, 20, 30}, 1);
  r.vu_series.push_back({0, 1, 1});
  const auto t = check_thresholds(r, {});
  const auto nd = report_ndjson(r, &t);
  std::vector<nlohmann::json> lines;
  std::istringstream in(nd);
  for (std::string l; std::getline(in, l);) lines.push_back(nlohmann::json::parse(l));
  ASSERT_EQ(lines.size(), 3u + 1 + 1 + 1);
  EXPECT_EQ(lines.front()["type"], "sample");
  EXPECT_EQ(lines.back()["type"], "summary");
  EXPECT_EQ(lines.back()["requests"], 3);
  EXPECT_EQ(lines.back()["failures"], 1);
  EXPECT_EQ(lines.back()["thresholds"]["passed"], false);
}

// In-process scenario with a fake request: every request appears exactly once
// and the active count follows the ramp.
TEST(Scenario, VuTrajectoryAndSampleConservation) {
  auto plan = parse_stages("1:6,1:6,1:0");
  plan.think_time = 50ms;
  std::atomic<long> calls{0};
  auto report = run_scenario(
      plan,
      [&](int) -> VuRequest {
        return [&] {
          ++calls;
          std::this_thread::sleep_for(2ms);
          return 200;
        };
      },
      RunOptions{50ms});
  EXPECT_EQ(report.samples.size(), static_cast<std::size_t>(calls.load()));
  std::uint64_t per_vu = 0;
  for (auto n : report.iterations_per_vu) per_vu += n;
  EXPECT_EQ(per_vu, report.samples.size());
  ASSERT_FALSE(report.vu_series.empty());
  for (const auto& p : report.vu_series) {
    EXPECT_LE(std::abs(p.active - std::lround(p.target)), 1)
        << "t=" << p.t_ms << " target=" << p.target << " active=" << p.active;
  }
  const auto s = report.stats();
  EXPECT_EQ(s.peak_active_vus, 6);
  EXPECT_EQ(s.failures, 0u);
  EXPECT_GT(s.throughput_rps, 0);
}

TEST(Scenario, ThrowingRequestsBecomeFailedSamples) {
  auto plan = parse_stages("0.5:2");
  plan.think_time = 20ms;
  auto report = run_scenario(plan, [](int vu) -> VuRequest {
    if (vu == 1) throw std::runtime_error("no client");
    return []() -> int { throw std::runtime_error("reset"); };
  });
  ASSERT_FALSE(report.samples.empty());
  for (const auto& s : report.samples) EXPECT_EQ(s.status, 0);
  EXPECT_DOUBLE_EQ(report.stats().failure_rate, 1.0);
}

class StubServer {
 public:
  StubServer() {
    server_.Get("/slow", [](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(10ms);
      res.set_content("ok", "text/plain");
    });
    server_.Get("/echo", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      seen_.push_back(req.get_header_value("Authorization") + "|" +
                      req.get_header_value("X-Forwarded-For"));
      res.set_content("ok", "text/plain");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }
  std::vector<std::string> seen() {
    std::lock_guard lock(mu_);
    return seen_;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mu_;
  std::vector<std::string> seen_;
};

// Measured latency over loopback matches the server's fixed delay.
TEST(Http, CalibratesAgainstFixedDelay) {
  StubServer stub;
  HttpTarget target;
  target.url = stub.url("/slow");
  preflight(target);
  auto plan = parse_stages("1.5:3");
  plan.think_time = 20ms;
  auto report = run_scenario(plan, http_factory(target));
  const auto s = report.stats();
  ASSERT_GT(s.requests, 10u);
  EXPECT_EQ(s.failures, 0u);
  EXPECT_GE(s.p50_ms, 9.5);
  EXPECT_LT(s.p50_ms, 60);
}

TEST(Http, HeadersAndUnreachableTarget) {
  StubServer stub;
  HttpTarget target;
  target.url = stub.url("/echo");
  target.tokens = {"t0", "t1"};
  target.synthetic_client_ips = true;
  auto factory = http_factory(target);
  EXPECT_EQ(factory(0)(), 200);
  EXPECT_EQ(factory(3)(), 200);
  EXPECT_EQ(factory(258)(), 200);
  EXPECT_EQ(stub.seen(), (std::vector<std::string>{"Bearer t0|10.0.0.0", "Bearer t1|10.0.0.3",
                                                   "Bearer t0|10.0.1.2"}));

  httplib::Server probe;
  const int dead = probe.bind_to_any_port("127.0.0.1");
  probe.stop();
  HttpTarget gone;
  gone.url = "http://127.0.0.1:" + std::to_string(dead) + "/x";
  gone.timeout = 500ms;
  try {
    preflight(gone);
    FAIL() << "expected a setup error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::upstream_error);
    EXPECT_NE(std::string(e.what()).find("setup error"), std::string::npos);
  }
  EXPECT_EQ(http_factory(gone)(0)(), 0);
}

}  // namespace
}  // namespace ehr::load
