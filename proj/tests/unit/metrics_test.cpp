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

#include <chrono>
#include <random>

#include <gtest/gtest.h>

#include "ehr/core/error.hpp"
#include "ehr/metrics/metrics.hpp"
#include "support/oracles.hpp"
#include "support/world.hpp"

namespace ehr::metrics {
namespace {

using TS = TokenSequence;

const TS kRef = {"patient", "has", "diabetes"};
const TS kGen = {"patient", "has", "chronic", "diabetes"};

void expect_triple(const ScoreTriple& s, double r, double p, double f, double tol = 1e-9) {
  EXPECT_NEAR(s.recall, r, tol);
  EXPECT_NEAR(s.precision, p, tol);
  EXPECT_NEAR(s.f1, f, tol);
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Patient has Diabetes."), kRef);
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("SpO2: 98%"), (TS{"spo2", "98"}));
  EXPECT_EQ(tokenize("  --  "), TS{});
  EXPECT_EQ(tokenize("Ölçüm ÉTAT"), (TS{"ölçüm", "état"}));
  EXPECT_EQ(tokenize("blood\xe2\x80\x94" "pressure"), (TS{"blood", "pressure"}));
  EXPECT_EQ(tokenize("a\xff" "b"), (TS{"a", "b"}));
}

TEST(Rouge, WorkedDiabetesPair) {
  expect_triple(rouge_n(kRef, kRef, 1), 1, 1, 1);
  expect_triple(rouge_n(kRef, kRef, 2), 1, 1, 1);
  expect_triple(rouge_n(kRef, kGen, 1), 1.0, 0.75, 6.0 / 7.0);
  EXPECT_NEAR(rouge_n(kRef, kGen, 1).f1, 0.8571, 1e-4);
  expect_triple(rouge_n(kRef, kGen, 2), 0.5, 1.0 / 3.0, 0.4);
  EXPECT_EQ(lcs_length(kRef, kGen), 3u);
  expect_triple(rouge_l(kRef, kGen), 1.0, 0.75, 6.0 / 7.0);
}

TEST(Rouge, EdgeCases) {
  EXPECT_EQ(lcs_length(kRef, {}), 0u);
  EXPECT_EQ(lcs_length(kGen, kGen), kGen.size());
  expect_triple(rouge_l(kRef, TS{"normal", "film"}), 0, 0, 0);
  expect_triple(rouge_n(kRef, {}, 1), 0, 0, 0);
  auto undefined = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind() == ErrorKind::undefined_input;
    }
    return false;
  };
  EXPECT_TRUE(undefined([] { rouge_n(TS{"one"}, TS{"one"}, 2); }));
  EXPECT_TRUE(undefined([] { rouge_n({}, TS{"x"}, 1); }));
  EXPECT_TRUE(undefined([] { rouge_l({}, TS{"x"}); }));
  EXPECT_EQ(f1_score(0, 0), 0.0);
}

TEST(Rouge, ClippedDuplicates) {
  // "the" appears twice in the reference, three times generated: two match.
  const TS ref = {"the", "cat", "the", "mat"};
  const TS gen = {"the", "the", "the", "dog"};
  expect_triple(rouge_n(ref, gen, 1), 0.5, 0.5, 0.5);
}

// Lengths up to 4 here; the acceptance suite covers up to 6.
TEST(Rouge, MatchesBruteForceOracleSmall) {
  const auto r = test::rouge_oracle_sweep(4);
  EXPECT_EQ(r.pairs, 121u * 121u);
  EXPECT_EQ(r.mismatches, 0u) << r.first_mismatch;
}

TEST(Rouge, Properties) {
  std::mt19937 rng(99);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  auto random_seq = [&](std::size_t min_len) {
    TS s(min_len + rng() % 8);
    for (auto& t : s) t = vocab[rng() % vocab.size()];
    return s;
  };
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_seq(2);
    const auto b = random_seq(2);
    for (int n = 1; n <= 2; ++n) {
      const auto ab = rouge_n(a, b, n);
      const auto ba = rouge_n(b, a, n);
      EXPECT_EQ(ab.recall, ba.precision);
      for (double v : {ab.recall, ab.precision, ab.f1}) ASSERT_TRUE(v >= 0 && v <= 1);
    }
    const auto l = lcs_length(a, b);
    EXPECT_EQ(l, lcs_length(b, a));
    EXPECT_LE(l, std::min(a.size(), b.size()));
    expect_triple(rouge_l(a, a), 1, 1, 1, 0);
    // Appending a reference token never lowers ROUGE-1 recall.
    auto longer = b;
    longer.push_back(a[rng() % a.size()]);
    EXPECT_GE(rouge_n(a, longer, 1).recall, rouge_n(a, b, 1).recall);
  }
}

TEST(Semantic, IdentityAndOrthogonal) {
  HashedTrigramProvider p;
  expect_triple(semantic_score(kRef, kRef, p), 1, 1, 1);
  // Find two tokens whose trigram buckets are disjoint; their vectors are
  // orthogonal by construction.
  const std::vector<std::string> pool = {"xq", "zz", "kv", "jj", "wyw", "pqp", "mmm", "vvk"};
  std::optional<std::pair<std::string, std::string>> pick;
  for (const auto& a : pool) {
    for (const auto& b : pool) {
      if (a == b || pick) continue;
      const auto ba = p.buckets(a);
      const auto bb = p.buckets(b);
      std::vector<std::size_t> common;
      std::set_intersection(ba.begin(), ba.end(), bb.begin(), bb.end(),
                            std::back_inserter(common));
      if (common.empty()) pick = {a, b};
    }
  }
  ASSERT_TRUE(pick);
  expect_triple(semantic_score(TS{pick->first}, TS{pick->second}, p), 0, 0, 0);
}

TEST(Semantic, MatchesCommittedOracle) {
  const auto rows = nlohmann::json::parse(test::read_text(
      std::filesystem::path(test::source_dir()) / "tests" / "fixtures" / "semantic_oracle.json"));
  ASSERT_EQ(rows.size(), 20u);
  HashedTrigramProvider p;
  for (const auto& row : rows) {
    const auto ref = tokenize(row["reference"].get<std::string>());
    const auto gen = tokenize(row["generated"].get<std::string>());
    EXPECT_EQ(ref, row["reference_tokens"].get<TS>());
    EXPECT_EQ(gen, row["generated_tokens"].get<TS>());
    expect_triple(semantic_score(ref, gen, p), row["recall"], row["precision"], row["f1"]);
  }
}

class BrokenProvider final : public EmbeddingProvider {
 public:
  std::vector<std::vector<double>> embed(const TokenSequence& t) const override {
    return std::vector<std::vector<double>>(t.size(), std::vector<double>(4, 0.0));
  }
  std::size_t dimension() const override { return 4; }
};

TEST(Semantic, ContractErrors) {
  HashedTrigramProvider p;
  EXPECT_THROW(semantic_score({}, kRef, p), Error);
  try {
    semantic_score(kRef, kRef, BrokenProvider{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::internal);
  }
  for (const auto& t : {"a", "patient", "ölçüm"}) {
    const auto v = p.embed_token(t);
    double n = 0;
    for (double x : v) {
      EXPECT_GE(x, 0.0);
      n += x * x;
    }
    EXPECT_NEAR(n, 1.0, 1e-12);
  }
}

TEST(BoxStats, Type7QuartilesAndFences) {
  const std::vector<double> v = {1, 2, 3, 4, 100};
  const auto b = box_stats(v, {0, 1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(b.q1, 2);
  EXPECT_DOUBLE_EQ(b.median, 3);
  EXPECT_DOUBLE_EQ(b.q3, 4);
  EXPECT_DOUBLE_EQ(b.iqr, 2);
  EXPECT_DOUBLE_EQ(b.upper_fence, 7);
  EXPECT_EQ(b.outliers, std::vector<std::size_t>{4});
  EXPECT_DOUBLE_EQ(quantile_sorted({0, 10}, 0.25), 2.5);
  EXPECT_EQ(box_stats({}, {}).count, 0u);
}

TEST(Corpus, IdentityPairMediansAreOne) {
  HashedTrigramProvider p;
  auto s = evaluate_corpus({{"Patient has diabetes.", "patient has diabetes"}}, p);
  ASSERT_EQ(s.metrics.size(), 4u);
  for (const auto& m : s.metrics) {
    EXPECT_DOUBLE_EQ(m.recall.median, 1);
    EXPECT_DOUBLE_EQ(m.precision.median, 1);
    EXPECT_DOUBLE_EQ(m.f1.median, 1);
  }
}

// Identity, the diabetes pair and a disjoint pair, aggregated by hand.
TEST(Corpus, ThreeWorkedFixtures) {
  HashedTrigramProvider p;
  auto s = evaluate_corpus({{"patient has diabetes", "patient has diabetes"},
                            {"patient has diabetes", "patient has chronic diabetes"},
                            {"patient has diabetes", "normal chest film"}},
                           p, {Metric::rouge1, Metric::rouge2, Metric::rougeL});
  const auto& r1 = s.metrics[0];
  // recall {1,1,0}; precision {1,0.75,0}
  EXPECT_NEAR(r1.recall.median, 1, 1e-12);
  EXPECT_NEAR(r1.recall.q1, 0.5, 1e-12);
  EXPECT_NEAR(r1.precision.median, 0.75, 1e-12);
  EXPECT_NEAR(r1.precision.q1, 0.375, 1e-12);
  EXPECT_NEAR(r1.precision.q3, 0.875, 1e-12);
  // rouge2 recall {1,0.5,0}; f1 {1,0.4,0}
  EXPECT_NEAR(s.metrics[1].recall.median, 0.5, 1e-12);
  EXPECT_NEAR(s.metrics[1].f1.median, 0.4, 1e-12);
  EXPECT_NEAR(s.metrics[2].f1.median, 6.0 / 7.0, 1e-12);
  EXPECT_EQ(s.evaluated, 3u);
}

TEST(Corpus, UndefinedPairsExcluded) {
  HashedTrigramProvider p;
  auto s = evaluate_corpus({{"", "text"}, {"a b", "a b"}, {"x", "x"}}, p);
  EXPECT_EQ(s.evaluated, 1u);  // "x" has no bigram
  EXPECT_EQ(s.excluded, 2u);
  const auto nd = per_pair_ndjson(s);
  EXPECT_EQ(std::count(nd.begin(), nd.end(), '\n'), 3);
  EXPECT_NE(nd.find("\"error\""), std::string::npos);
  EXPECT_THROW(evaluate_corpus({}, p), Error);
}

// Generated = reference plus filler: recall stays 1, precision drops.
TEST(Corpus, RecallAbovePrecisionOnPaddedSummaries) {
  std::mt19937 rng(5);
  const std::vector<std::string> words = {"patient", "reports", "cough", "fever", "history",
                                          "of", "asthma", "treated", "with", "inhaler",
                                          "stable", "vitals", "review", "two", "weeks"};
  std::vector<TextPair> corpus;
  for (int i = 0; i < 40; ++i) {
    std::string ref, pad;
    for (int k = 0; k < 8 + static_cast<int>(rng() % 8); ++k) ref += words[rng() % words.size()] + " ";
    for (int k = 0; k < 3 + static_cast<int>(rng() % 6); ++k) pad += " filler" + std::to_string(k);
    corpus.push_back({ref, ref + pad});
  }
  HashedTrigramProvider p;
  auto s = evaluate_corpus(corpus, p);
  for (const auto& m : s.metrics) {
    EXPECT_GT(m.recall.median, m.precision.median) << to_string(m.metric);
    for (const auto& t : m.triples) EXPECT_GE(t.recall, t.precision);
  }
}

TEST(Corpus, HundredFiftyPairsUnderFiveSeconds) {
  std::mt19937 rng(150);
  const std::vector<std::string> words = {
      "patient", "diabetes", "hypertension", "metformin", "lisinopril", "asthma", "cough",
      "fever", "chronic", "allergy", "penicillin", "visit", "follow", "up", "blood",
      "pressure", "controlled", "stable", "normal", "xray", "pneumonia", "treated"};
  auto text = [&](int n) {
    std::string s;
    for (int k = 0; k < n; ++k) s += words[rng() % words.size()] + " ";
    return s;
  };
  std::vector<TextPair> corpus;
  for (int i = 0; i < 150; ++i) corpus.push_back({text(120), text(60)});
  HashedTrigramProvider p;
  const auto t0 = std::chrono::steady_clock::now();
  auto s = evaluate_corpus(corpus, p);
  const auto secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 5.0);
  EXPECT_EQ(s.evaluated, 150u);
  const auto j = to_json(s);
  EXPECT_TRUE(j.contains("metrics"));
}

TEST(Corpus, NdjsonInputAndMetricList) {
  auto pairs = read_pairs_ndjson(
      "{\"reference\":\"a b\",\"generated\":\"a\"}\n\n{\"reference\":\"c\",\"generated\":\"c\"}\n");
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[1].reference, "c");
  EXPECT_THROW(read_pairs_ndjson("{\"reference\":1}"), Error);
  EXPECT_EQ(parse_metric_list("rouge1,rougeL"), (std::vector<Metric>{Metric::rouge1, Metric::rougeL}));
  EXPECT_THROW(parse_metric_list("bleu"), Error);
}

}  // namespace
}  // namespace ehr::metrics
