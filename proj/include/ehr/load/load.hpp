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

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ehr::load {

struct Stage {
  double duration_s = 0;
  int target_vus = 0;
};

struct StagePlan {
  std::vector<Stage> stages;
  std::chrono::milliseconds think_time{1000};

  double total_seconds() const;
  // Linear ramp from the previous stage's target (0 before the first stage).
  double target_at(double t_seconds) const;
  int peak_vus() const;
};

// "60:50,120:50,60:0" -> three stages. Throws Error(validation_error).
StagePlan parse_stages(std::string_view text);
// Throws Error(validation_error) for an empty plan, non-positive durations or
// negative targets.
void validate(const StagePlan& plan);

struct Sample {
  double start_ms = 0;  // since scenario start
  double duration_ms = 0;
  int status = 0;       // 0 for a transport error
  int vu = 0;

  bool failed() const { return status != 200; }
};

struct VuPoint {
  double t_ms = 0;
  double target = 0;
  int active = 0;
};

struct LatencyPoint {
  double t_s = 0;
  std::size_t count = 0;
  double mean_ms = 0;
  double p95_ms = 0;
};

struct LoadStats {
  std::size_t requests = 0;
  std::size_t failures = 0;
  double failure_rate = 0;
  double mean_ms = 0, min_ms = 0, max_ms = 0;
  double p50_ms = 0, p95_ms = 0, p99_ms = 0;
  double throughput_rps = 0;
  int peak_active_vus = 0;
};

struct LoadReport {
  std::vector<Sample> samples;
  std::vector<VuPoint> vu_series;
  std::vector<std::uint64_t> iterations_per_vu;
  double elapsed_s = 0;

  // Recomputed from the samples each call.
  LoadStats stats() const;
  std::vector<LatencyPoint> latency_series(double bucket_s = 1.0) const;
};

// Nearest-rank: the ceil(q*N)-th smallest sample. Throws
// Error(undefined_input) on an empty sample or q outside (0, 1].
double percentile(std::vector<double> samples, double q);

struct ThresholdSpec {
  double p95_ms = 500;
  double max_failure_rate = 0.01;
};

struct ThresholdResult {
  bool passed = true;
  std::vector<std::string> violations;  // "p95" and/or "failure_rate"
  double p95_ms = 0;
  double failure_rate = 0;
};

// Fails iff p95 >= spec.p95_ms or failure rate >= spec.max_failure_rate.
// Throws Error(undefined_input) on a report without samples.
ThresholdResult check_thresholds(const LoadReport& report, const ThresholdSpec& spec);

// One request: returns the HTTP status, 0 (or throws) on transport failure.
using VuRequest = std::function<int()>;
// Builds the per-VU request function; called on the VU's own thread.
using VuFactory = std::function<VuRequest(int vu)>;

struct RunOptions {
  std::chrono::milliseconds tick{100};
};

// One worker per VU; each loops request -> record -> think while its index is
// below the interpolated target. Mid-run failures become failed samples.
LoadReport run_scenario(const StagePlan& plan, const VuFactory& factory, RunOptions options = {});

struct HttpTarget {
  std::string url;                  // e.g. http://127.0.0.1:8080/api/user/profile
  std::vector<std::string> tokens;  // round-robin by VU; may be empty
  // Send X-Forwarded-For 10.x.y.z per VU so per-address limits see distinct
  // clients behind a trusted proxy.
  bool synthetic_client_ips = false;
  std::chrono::milliseconds timeout{10000};
};

// Throws Error(upstream_error) naming a setup error when the target does not
// answer a preflight request.
VuFactory http_factory(const HttpTarget& target);
void preflight(const HttpTarget& target);

// NDJSON: sample lines, vus lines, latency lines, then one summary line.
std::string report_ndjson(const LoadReport& report, const ThresholdResult* thresholds = nullptr);
nlohmann::json to_json(const LoadStats& s);

}  // namespace ehr::load
