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

// Brute-force reference implementations shared by the unit and acceptance
// suites. Deliberately naive; nothing here calls into the library.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ehr/metrics/metrics.hpp"

namespace ehr::test {

struct BruteTriple {
  double recall = 0;
  double precision = 0;
  double f1 = 0;
};

inline double brute_f1(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

// nullopt where the reference has fewer than n tokens.
inline std::optional<BruteTriple> brute_rouge_n(const std::vector<std::string>& ref,
                                                const std::vector<std::string>& gen, int n) {
  if (static_cast<int>(ref.size()) < n) return std::nullopt;
  auto grams = [n](const std::vector<std::string>& s) {
    std::vector<std::vector<std::string>> out;
    for (int i = 0; i + n <= static_cast<int>(s.size()); ++i) {
      out.emplace_back(s.begin() + i, s.begin() + i + n);
    }
    return out;
  };
  const auto r = grams(ref);
  const auto g = grams(gen);
  // Pair each reference n-gram with a distinct unused equal generated n-gram.
  std::vector<bool> used(g.size(), false);
  std::size_t matched = 0;
  for (const auto& x : r) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (!used[j] && g[j] == x) {
        used[j] = true;
        ++matched;
        break;
      }
    }
  }
  BruteTriple t;
  t.recall = static_cast<double>(matched) / static_cast<double>(r.size());
  t.precision = g.empty() ? 0.0 : static_cast<double>(matched) / static_cast<double>(g.size());
  t.f1 = brute_f1(t.precision, t.recall);
  return t;
}

// Longest subsequence of `a` (over all 2^|a| subsets) that is a subsequence of `b`.
inline std::size_t brute_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t best = 0;
  const unsigned total = 1u << a.size();
  for (unsigned mask = 0; mask < total; ++mask) {
    const auto bits = static_cast<std::size_t>(__builtin_popcount(mask));
    if (bits <= best) continue;
    std::size_t j = 0;
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      while (j < b.size() && b[j] != a[i]) ++j;
      if (j == b.size()) ok = false;
      ++j;
    }
    if (ok) best = bits;
  }
  return best;
}

// Every sequence over {a,b,c} with length in [min_len, max_len].
inline std::vector<std::vector<std::string>> all_sequences(int min_len, int max_len) {
  std::vector<std::vector<std::string>> out;
  for (int len = min_len; len <= max_len; ++len) {
    int count = 1;
    for (int i = 0; i < len; ++i) count *= 3;
    for (int code = 0; code < count; ++code) {
      std::vector<std::string> s;
      for (int i = 0, c = code; i < len; ++i, c /= 3) s.push_back(std::string(1, "abc"[c % 3]));
      out.push_back(std::move(s));
    }
  }
  return out;
}

struct SweepResult {
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  std::string first_mismatch;
};

// rouge_n (n = 1, 2) and lcs_length against the brute-force versions, bit-exact.
inline SweepResult rouge_oracle_sweep(int max_len) {
  const auto seqs = all_sequences(0, max_len);
  SweepResult res;
  auto note = [&](const std::string& what, std::size_t i, std::size_t j) {
    if (res.mismatches++ == 0) {
      res.first_mismatch = what + " at pair " + std::to_string(i) + "," + std::to_string(j);
    }
  };
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    for (std::size_t j = 0; j < seqs.size(); ++j) {
      ++res.pairs;
      const auto& a = seqs[i];
      const auto& b = seqs[j];
      for (int n = 1; n <= 2; ++n) {
        const auto want = brute_rouge_n(a, b, n);
        try {
          const auto got = metrics::rouge_n(a, b, n);
          if (!want || got.recall != want->recall || got.precision != want->precision ||
              got.f1 != want->f1) {
            note("rouge_" + std::to_string(n), i, j);
          }
        } catch (const std::exception&) {
          if (want) note("rouge_" + std::to_string(n) + " threw", i, j);
        }
      }
      if (metrics::lcs_length(a, b) != brute_lcs(a, b)) note("lcs", i, j);
    }
  }
  return res;
}

}  // namespace ehr::test
