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

#include <algorithm>
#include <cmath>

#include "ehr/core/error.hpp"
#include "ehr/metrics/metrics.hpp"

namespace ehr::metrics {
namespace {

std::vector<std::string> ngrams(const TokenSequence& tokens, int n) {
  std::vector<std::string> out;
  if (tokens.size() < static_cast<std::size_t>(n)) return out;
  out.reserve(tokens.size() - n + 1);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key += '\x1f';
      key += tokens[i + k];
    }
    out.push_back(std::move(key));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Size of the multiset intersection of two sorted ranges, i.e. the sum over
// distinct n-grams of min(count_a, count_b).
std::size_t clipped_matches(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t i = 0, j = 0, m = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++m;
      ++i;
      ++j;
    }
  }
  return m;
}

ScoreTriple triple(std::size_t matches, std::size_t ref_count, std::size_t gen_count) {
  ScoreTriple s;
  s.recall = static_cast<double>(matches) / static_cast<double>(ref_count);
  s.precision = gen_count == 0 ? 0.0 : static_cast<double>(matches) / static_cast<double>(gen_count);
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

}  // namespace

double f1_score(double precision, double recall) noexcept {
  if (precision + recall <= 0) return 0.0;
  return 2 * precision * recall / (precision + recall);
}

ScoreTriple rouge_n(const TokenSequence& reference, const TokenSequence& generated, int n) {
  if (n < 1) throw Error(ErrorKind::undefined_input, "n must be at least 1");
  if (reference.size() < static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::undefined_input,
                "reference has fewer than " + std::to_string(n) + " tokens");
  }
  const auto ref = ngrams(reference, n);
  const auto gen = ngrams(generated, n);
  return triple(clipped_matches(ref, gen), ref.size(), gen.size());
}

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

ScoreTriple rouge_l(const TokenSequence& reference, const TokenSequence& generated) {
  if (reference.empty()) throw Error(ErrorKind::undefined_input, "reference is empty");
  return triple(lcs_length(reference, generated), reference.size(), generated.size());
}

std::set<std::size_t> HashedTrigramProvider::buckets(std::string_view token) const {
  std::set<std::size_t> out;
  const std::string padded = "#" + std::string(token) + "#";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    std::uint32_t h = 2166136261u;
    for (std::size_t k = 0; k < 3; ++k) {
      h ^= static_cast<unsigned char>(padded[i + k]);
      h *= 16777619u;
    }
    out.insert(h % dim_);
  }
  return out;
}

std::vector<double> HashedTrigramProvider::embed_token(std::string_view token) const {
  std::vector<double> v(dim_, 0.0);
  const std::string padded = "#" + std::string(token) + "#";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    std::uint32_t h = 2166136261u;
    for (std::size_t k = 0; k < 3; ++k) {
      h ^= static_cast<unsigned char>(padded[i + k]);
      h *= 16777619u;
    }
    v[h % dim_] += 1.0;
  }
  double norm = 0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0) {
    for (double& x : v) x /= norm;
  }
  return v;
}

std::vector<std::vector<double>> HashedTrigramProvider::embed(const TokenSequence& tokens) const {
  std::vector<std::vector<double>> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(embed_token(t));
  return out;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) throw Error(ErrorKind::internal, "zero-magnitude embedding vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

ScoreTriple semantic_score(const TokenSequence& reference, const TokenSequence& generated,
                           const EmbeddingProvider& provider) {
  if (reference.empty() || generated.empty()) {
    throw Error(ErrorKind::undefined_input, "semantic score needs nonempty texts");
  }
  const auto ref = provider.embed(reference);
  const auto gen = provider.embed(generated);
  const auto dim = provider.dimension();
  if (ref.size() != reference.size() || gen.size() != generated.size()) {
    throw Error(ErrorKind::internal, "embedding provider returned the wrong number of vectors");
  }
  for (const auto* side : {&ref, &gen}) {
    for (const auto& v : *side) {
      if (v.size() != dim) throw Error(ErrorKind::internal, "embedding dimension mismatch");
    }
  }

  // sim[i][j] for reference token i, generated token j.
  std::vector<double> sim(ref.size() * gen.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    for (std::size_t j = 0; j < gen.size(); ++j) {
      sim[i * gen.size() + j] = std::clamp(cosine(ref[i], gen[j]), 0.0, 1.0);
    }
  }
  double recall = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    double best = 0;
    for (std::size_t j = 0; j < gen.size(); ++j) best = std::max(best, sim[i * gen.size() + j]);
    recall += best;
  }
  double precision = 0;
  for (std::size_t j = 0; j < gen.size(); ++j) {
    double best = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) best = std::max(best, sim[i * gen.size() + j]);
    precision += best;
  }
  ScoreTriple s;
  s.recall = recall / static_cast<double>(ref.size());
  s.precision = precision / static_cast<double>(gen.size());
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

}  // namespace ehr::metrics
