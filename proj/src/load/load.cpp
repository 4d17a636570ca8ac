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

#include "ehr/load/load.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "ehr/core/error.hpp"

namespace ehr::load {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && p == end;
}

}  // namespace

double StagePlan::total_seconds() const {
  double t = 0;
  for (const auto& s : stages) t += s.duration_s;
  return t;
}

double StagePlan::target_at(double t) const {
  double from = 0;
  double start = 0;
  for (const auto& s : stages) {
    if (t < start + s.duration_s) {
      const double f = std::max(0.0, t - start) / s.duration_s;
      return from + (s.target_vus - from) * f;
    }
    from = s.target_vus;
    start += s.duration_s;
  }
  return from;
}

int StagePlan::peak_vus() const {
  int peak = 0;
  for (const auto& s : stages) peak = std::max(peak, s.target_vus);
  return peak;
}

void validate(const StagePlan& plan) {
  if (plan.stages.empty()) throw Error(ErrorKind::validation_error, "setup error: plan has no stages");
  for (const auto& s : plan.stages) {
    if (!(s.duration_s > 0)) throw Error(ErrorKind::validation_error, "stage duration must be > 0");
    if (s.target_vus < 0) throw Error(ErrorKind::validation_error, "stage target must be >= 0");
  }
  if (plan.think_time.count() < 0) throw Error(ErrorKind::validation_error, "negative think time");
}

StagePlan parse_stages(std::string_view text) {
  StagePlan plan;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const auto item = text.substr(start, end - start);
    const auto colon = item.find(':');
    Stage s;
    if (colon == std::string_view::npos || !parse_number(item.substr(0, colon), s.duration_s) ||
        !parse_number(item.substr(colon + 1), s.target_vus)) {
      throw Error(ErrorKind::validation_error,
                  "bad stage \"" + std::string(item) + "\", expected seconds:vus");
    }
    plan.stages.push_back(s);
    start = end + 1;
  }
  validate(plan);
  return plan;
}

double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) throw Error(ErrorKind::undefined_input, "percentile of empty sample");
  if (!(q > 0 && q <= 1)) throw Error(ErrorKind::undefined_input, "q must be in (0, 1]");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  // The epsilon keeps 0.95 * 20 from rounding up to rank 20.
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, samples.size());
  return samples[rank - 1];
}

LoadStats LoadReport::stats() const {
  LoadStats s;
  s.requests = samples.size();
  for (const auto& p : vu_series) s.peak_active_vus = std::max(s.peak_active_vus, p.active);
  if (samples.empty()) return s;
  std::vector<double> d;
  d.reserve(samples.size());
  for (const auto& x : samples) {
    d.push_back(x.duration_ms);
    if (x.failed()) ++s.failures;
  }
  s.failure_rate = static_cast<double>(s.failures) / static_cast<double>(s.requests);
  s.mean_ms = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
  s.min_ms = *std::min_element(d.begin(), d.end());
  s.max_ms = *std::max_element(d.begin(), d.end());
  s.p50_ms = percentile(d, 0.50);
  s.p95_ms = percentile(d, 0.95);
  s.p99_ms = percentile(d, 0.99);
  s.throughput_rps = elapsed_s > 0 ? s.requests / elapsed_s : 0;
  return s;
}

std::vector<LatencyPoint> LoadReport::latency_series(double bucket_s) const {
  std::vector<std::vector<double>> buckets;
  for (const auto& x : samples) {
    const auto b = static_cast<std::size_t>(x.start_ms / 1000.0 / bucket_s);
    if (buckets.size() <= b) buckets.resize(b + 1);
    buckets[b].push_back(x.duration_ms);
  }
  std::vector<LatencyPoint> out;
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    LatencyPoint p{i * bucket_s, buckets[i].size(), 0, 0};
    if (!buckets[i].empty()) {
      p.mean_ms = std::accumulate(buckets[i].begin(), buckets[i].end(), 0.0) / buckets[i].size();
      p.p95_ms = percentile(buckets[i], 0.95);
    }
    out.push_back(p);
  }
  return out;
}

ThresholdResult check_thresholds(const LoadReport& report, const ThresholdSpec& spec) {
  if (report.samples.empty()) throw Error(ErrorKind::undefined_input, "report has no samples");
  const auto s = report.stats();
  ThresholdResult r;
  r.p95_ms = s.p95_ms;
  r.failure_rate = s.failure_rate;
  if (s.p95_ms >= spec.p95_ms) r.violations.push_back("p95");
  if (s.failure_rate >= spec.max_failure_rate) r.violations.push_back("failure_rate");
  r.passed = r.violations.empty();
  return r;
}

LoadReport run_scenario(const StagePlan& plan, const VuFactory& factory, RunOptions options) {
  validate(plan);
  const int peak = plan.peak_vus();

  struct Shared {
    std::mutex mu;
    std::condition_variable cv;
    int target = 0;
    bool done = false;
    std::atomic<int> active{0};
    std::mutex samples_mu;
    std::vector<Sample> samples;
  } sh;
  std::vector<std::uint64_t> iterations(peak, 0);
  const auto start = Clock::now();

  auto worker = [&](int vu) {
    VuRequest request;
    try {
      request = factory(vu);
    } catch (...) {
      request = [] { return 0; };
    }
    std::vector<Sample> local;
    for (;;) {
      {
        std::unique_lock lock(sh.mu);
        sh.cv.wait(lock, [&] { return sh.done || vu < sh.target; });
        if (sh.done) break;
      }
      sh.active.fetch_add(1);
      for (;;) {
        Sample s;
        s.vu = vu;
        s.start_ms = ms_since(start);
        const auto t0 = Clock::now();
        try {
          s.status = request();
        } catch (...) {
          s.status = 0;
        }
        s.duration_ms = ms_since(t0);
        local.push_back(s);
        ++iterations[vu];

        std::unique_lock lock(sh.mu);
        // Think time, cut short when this VU is ramped away or the run ends.
        sh.cv.wait_for(lock, plan.think_time, [&] { return sh.done || vu >= sh.target; });
        if (sh.done || vu >= sh.target) break;
      }
      sh.active.fetch_sub(1);
    }
    std::lock_guard lock(sh.samples_mu);
    sh.samples.insert(sh.samples.end(), local.begin(), local.end());
  };

  std::vector<std::thread> threads;
  threads.reserve(peak);
  for (int vu = 0; vu < peak; ++vu) threads.emplace_back(worker, vu);

  LoadReport report;
  const double total_ms = plan.total_seconds() * 1000.0;
  const auto settle = std::min(options.tick / 2, std::chrono::milliseconds(20));
  for (long k = 0;; ++k) {
    const double t = ms_since(start);
    if (t >= total_ms) break;
    const double target = plan.target_at(t / 1000.0);
    {
      std::lock_guard lock(sh.mu);
      sh.target = static_cast<int>(std::lround(target));
    }
    sh.cv.notify_all();
    // Give woken or parked workers a moment before sampling the count.
    std::this_thread::sleep_for(settle);
    report.vu_series.push_back({t, target, sh.active.load()});
    std::this_thread::sleep_until(start + (k + 1) * options.tick);
  }
  {
    std::lock_guard lock(sh.mu);
    sh.done = true;
    sh.target = 0;
  }
  sh.cv.notify_all();
  for (auto& th : threads) th.join();

  report.elapsed_s = ms_since(start) / 1000.0;
  report.samples = std::move(sh.samples);
  std::sort(report.samples.begin(), report.samples.end(),
            [](const Sample& a, const Sample& b) { return a.start_ms < b.start_ms; });
  report.iterations_per_vu = std::move(iterations);
  return report;
}

nlohmann::json to_json(const LoadStats& s) {
  return {{"requests", s.requests},       {"failures", s.failures},
          {"failure_rate", s.failure_rate}, {"mean_ms", s.mean_ms},
          {"min_ms", s.min_ms},           {"max_ms", s.max_ms},
          {"p50_ms", s.p50_ms},           {"p95_ms", s.p95_ms},
          {"p99_ms", s.p99_ms},           {"throughput_rps", s.throughput_rps},
          {"peak_active_vus", s.peak_active_vus}};
}

std::string report_ndjson(const LoadReport& report, const ThresholdResult* thresholds) {
  std::string out;
  for (const auto& s : report.samples) {
    out += nlohmann::json{{"type", "sample"},
                          {"start_ms", s.start_ms},
                          {"duration_ms", s.duration_ms},
                          {"status", s.status},
                          {"vu", s.vu}}
               .dump() +
           "\n";
  }
  for (const auto& p : report.vu_series) {
    out += nlohmann::json{{"type", "vus"}, {"t_ms", p.t_ms}, {"target", p.target},
                          {"active", p.active}}
               .dump() +
           "\n";
  }
  for (const auto& p : report.latency_series()) {
    out += nlohmann::json{{"type", "latency"}, {"t_s", p.t_s}, {"count", p.count},
                          {"mean_ms", p.mean_ms}, {"p95_ms", p.p95_ms}}
               .dump() +
           "\n";
  }
  nlohmann::json summary = to_json(report.stats());
  summary["type"] = "summary";
  summary["elapsed_s"] = report.elapsed_s;
  if (thresholds) {
    summary["thresholds"] = {{"passed", thresholds->passed},
                             {"violations", thresholds->violations}};
  }
  out += summary.dump() + "\n";
  return out;
}

}  // namespace ehr::load
