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
#include <optional>
#include <string>
#include <string_view>

#include "ehr/core/clock.hpp"

namespace ehr {

// "2025-01-28T00:02:44.911Z"
std::string format_iso8601(Timestamp t);
// Accepts "YYYY-MM-DDTHH:MM:SS[.mmm]Z" and a bare "YYYY-MM-DD" (midnight UTC).
std::optional<Timestamp> parse_iso8601(std::string_view text);

// Strict "YYYY-MM-DD"; rejects dates that are not on the calendar.
std::optional<std::chrono::year_month_day> parse_date(std::string_view text);
std::string format_date(std::chrono::year_month_day d);

inline Timestamp to_timestamp(std::chrono::year_month_day d) {
  return Timestamp{std::chrono::sys_days{d}.time_since_epoch()};
}

inline std::chrono::year_month_day to_date(Timestamp t) {
  return std::chrono::year_month_day{std::chrono::floor<std::chrono::days>(t)};
}

}  // namespace ehr
