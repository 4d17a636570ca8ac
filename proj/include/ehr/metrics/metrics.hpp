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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ehr::metrics {

using TokenSequence = std::vector<std::string>;

// Lowercase, then split on runs of non-alphanumeric code points. UTF-8 aware:
// letters outside ASCII count as alphanumeric unless they fall in a
// punctuation/symbol block. Invalid bytes act as separators.
TokenSequence tokenize(std::string_view text);

struct ScoreTriple {
  double recall = 0;
  double precision = 0;
  double f1 = 0;
};

// 2PR/(P+R), or 0 when P+R = 0.
double f1_score(double precision, double recall) noexcept;

// Clipped n-gram overlap. Throws Error(undefined_input) when the reference
// has fewer than n tokens or n < 1. An empty generated side scores 0.
ScoreTriple rouge_n(const TokenSequence& reference, const TokenSequence& generated, int n);

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b);

// Throws Error(undefined_input) on an empty reference.
ScoreTriple rouge_l(const TokenSequence& reference, const TokenSequence& generated);

// One vector per token, constant dimension.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<std::vector<double>> embed(const TokenSequence& tokens) const = 0;
  virtual std::size_t dimension() const = 0;
};

// Hashed character trigrams of "#token#" (FNV-1a into `dim` buckets, +1 per
// trigram), unit-normalized. All components are non-negative.
class HashedTrigramProvider final : public EmbeddingProvider {
 public:
  explicit HashedTrigramProvider(std::size_t dim = 64) : dim_(dim) {}
  std::vector<std::vector<double>> embed(const TokenSequence& tokens) const override;
  std::vector<double> embed_token(std::string_view token) const;
  std::size_t dimension() const override { return dim_; }
  // Bucket indices a token's trigrams fall into.
  std::set<std::size_t> buckets(std::string_view token) const;

 private:
  std::size_t dim_;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Greedy max-cosine matching. Recall averages over reference tokens, precision
// over generated tokens. Similarities are clamped to [0,1]. Throws
// Error(undefined_input) on an empty side and Error(internal) when the
// provider returns a zero vector or the wrong count/dimension.
ScoreTriple semantic_score(const TokenSequence& reference, const TokenSequence& generated,
                           const EmbeddingProvider& provider);

enum class Metric { rouge1, rouge2, rougeL, semantic };

std::string_view to_string(Metric m) noexcept;
std::optional<Metric> metric_from_string(std::string_view s) noexcept;
// Parses "rouge1,rouge2,rougeL,semantic".
std::vector<Metric> parse_metric_list(std::string_view csv);

struct BoxStats {
  std::size_t count = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, iqr = 0;
  double lower_fence = 0, upper_fence = 0;
  std::vector<std::size_t> outliers;  // pair indices outside the fences
};

// Linear-interpolation quantile (sorted input, 0 <= q <= 1).
double quantile_sorted(const std::vector<double>& sorted, double q);
// Quartiles with fences at Q1 - 1.5 IQR and Q3 + 1.5 IQR. `indices` names each
// value's pair for the outlier list.
BoxStats box_stats(const std::vector<double>& values, const std::vector<std::size_t>& indices);

struct TextPair {
  std::string reference;
  std::string generated;
};

struct PairScores {
  std::size_t index = 0;
  std::vector<std::pair<Metric, ScoreTriple>> scores;
};

struct PairError {
  std::size_t index = 0;
  std::string error;
};

struct MetricStats {
  Metric metric;
  std::vector<ScoreTriple> triples;
  BoxStats recall, precision, f1;
};

struct CorpusStats {
  std::vector<MetricStats> metrics;
  std::vector<PairScores> pairs;
  std::vector<PairError> errors;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
};

// Pairs whose reference cannot be scored are reported in `errors` and left out
// of every statistic. Throws Error(undefined_input) on an empty corpus.
CorpusStats evaluate_corpus(const std::vector<TextPair>& pairs, const EmbeddingProvider& provider,
                            const std::vector<Metric>& metrics = {Metric::rouge1, Metric::rouge2,
                                                                  Metric::rougeL,
                                                                  Metric::semantic});

nlohmann::json to_json(const ScoreTriple& s);
nlohmann::json to_json(const BoxStats& b);
nlohmann::json to_json(const CorpusStats& stats);
// One line per pair: {index, rouge1:{...}, ...} or {index, error}.
std::string per_pair_ndjson(const CorpusStats& stats);

// Newline-delimited {"reference": ..., "generated": ...} records.
std::vector<TextPair> read_pairs_ndjson(std::string_view text);

}  // namespace ehr::metrics
