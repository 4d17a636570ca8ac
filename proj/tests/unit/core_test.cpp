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

#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "ehr/core/clock.hpp"
#include "ehr/core/crypto.hpp"
#include "ehr/core/error.hpp"
#include "ehr/core/ids.hpp"
#include "ehr/core/time_format.hpp"

namespace ehr {
namespace {

using namespace std::chrono;

TEST(Error, HttpMapping) {
  EXPECT_EQ(http_status(ErrorKind::unauthorized), 401);
  EXPECT_EQ(http_status(ErrorKind::forbidden), 403);
  EXPECT_EQ(http_status(ErrorKind::access_denied), 403);
  EXPECT_EQ(http_status(ErrorKind::validation_error), 422);
  EXPECT_EQ(http_status(ErrorKind::not_found), 404);
  EXPECT_EQ(http_status(ErrorKind::conflict), 409);
  EXPECT_EQ(http_status(ErrorKind::rate_limited), 429);
  EXPECT_EQ(http_status(ErrorKind::bad_gateway), 502);
  EXPECT_NE(to_string(ErrorKind::forbidden), to_string(ErrorKind::access_denied));
}

TEST(TimeFormat, Iso8601RoundTrip) {
  const auto t = from_unix_seconds(1'700'000'000) + milliseconds(123);
  EXPECT_EQ(format_iso8601(t), "2023-11-14T22:13:20.123Z");
  EXPECT_EQ(parse_iso8601(format_iso8601(t)), t);
  EXPECT_EQ(parse_iso8601("2023-11-14T22:13:20Z"), from_unix_seconds(1'700'000'000));
  EXPECT_FALSE(parse_iso8601("yesterday"));
}

TEST(TimeFormat, CalendarDates) {
  EXPECT_TRUE(parse_date("2024-02-29"));
  EXPECT_FALSE(parse_date("2023-02-29"));
  EXPECT_FALSE(parse_date("31-02-2024"));
  EXPECT_FALSE(parse_date("2024-13-01"));
  EXPECT_EQ(format_date(year{2024} / 5 / 1), "2024-05-01");
}

TEST(Crypto, KnownVectors) {
  EXPECT_EQ(crypto::to_hex(crypto::sha256("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  // RFC 4231 test case 2.
  EXPECT_EQ(crypto::to_hex(crypto::hmac_sha256("Jefe", "what do ya want for nothing?")),
            "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
  EXPECT_EQ(crypto::base64url_encode("\xfb\xff"), "-_8");
  EXPECT_EQ(crypto::base64url_decode("-_8"), std::string("\xfb\xff"));
  EXPECT_FALSE(crypto::base64url_decode("a*b"));
  EXPECT_TRUE(crypto::constant_time_equal("abc", "abc"));
  EXPECT_FALSE(crypto::constant_time_equal("abc", "abd"));
}

TEST(Ids, SequentialAreReproducible) {
  SequentialIds a, b;
  EXPECT_EQ(a.next("visit"), "visit-000001");
  EXPECT_EQ(a.next("x"), "x-000002");
  EXPECT_EQ(b.next("visit"), "visit-000001");
}

TEST(Ids, RandomAreUniqueUnderConcurrency) {
  RandomIds ids;
  std::vector<std::set<std::string>> seen(4);
  std::vector<std::thread> ts;
  for (int t = 0; t < 4; ++t) {
    ts.emplace_back([&, t] {
      for (int i = 0; i < 500; ++i) seen[t].insert(ids.next("k"));
    });
  }
  for (auto& t : ts) t.join();
  std::set<std::string> all;
  for (auto& s : seen) all.insert(s.begin(), s.end());
  EXPECT_EQ(all.size(), 2000u);
  EXPECT_EQ(all.begin()->size(), 24u);
}

TEST(Clock, ManualClockAdvances) {
  ManualClock c;
  const auto t0 = c.now();
  c.advance(seconds(61));
  EXPECT_EQ(c.now() - t0, milliseconds(61000));
}

}  // namespace
}  // namespace ehr
