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
#include <sstream>

#include "ehr/core/error.hpp"
#include "ehr/metrics/metrics.hpp"

namespace ehr::metrics {

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::rouge1: return "rouge1";
    case Metric::rouge2: return "rouge2";
    case Metric::rougeL: return "rougeL";
    case Metric::semantic: return "semantic";
  }
  return "rouge1";
}

std::optional<Metric> metric_from_string(std::string_view s) noexcept {
  for (auto m : {Metric::rouge1, Metric::rouge2, Metric::rougeL, Metric::semantic}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::vector<Metric> parse_metric_list(std::string_view csv) {
  std::vector<Metric> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    auto end = csv.find(',', start);
    if (end == std::string_view::npos) end = csv.size();
    const auto name = csv.substr(start, end - start);
    if (!name.empty()) {
      auto m = metric_from_string(name);
      if (!m) throw Error(ErrorKind::validation_error, "unknown metric: " + std::string(name));
      if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
    }
    start = end + 1;
  }
  if (out.empty()) throw Error(ErrorKind::validation_error, "no metrics selected");
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw Error(ErrorKind::undefined_input, "quantile of empty sample");
  const double h = (sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(const std::vector<double>& values, const std::vector<std::size_t>& indices) {
  BoxStats b;
  b.count = values.size();
  if (values.empty()) return b;
  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  b.min = sorted.front();
  b.max = sorted.back();
  b.q1 = quantile_sorted(sorted, 0.25);
  b.median = quantile_sorted(sorted, 0.5);
  b.q3 = quantile_sorted(sorted, 0.75);
  b.iqr = b.q3 - b.q1;
  b.lower_fence = b.q1 - 1.5 * b.iqr;
  b.upper_fence = b.q3 + 1.5 * b.iqr;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < b.lower_fence || values[i] > b.upper_fence) b.outliers.push_back(indices[i]);
  }
  return b;
}

CorpusStats evaluate_corpus(const std::vector<TextPair>& pairs, const EmbeddingProvider& provider,
                            const std::vector<Metric>& metrics) {
  if (pairs.empty()) throw Error(ErrorKind::undefined_input, "corpus is empty");
  CorpusStats stats;
  for (auto m : metrics) stats.metrics.push_back({m, {}, {}, {}, {}});
  std::vector<std::size_t> kept;

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto ref = tokenize(pairs[i].reference);
    const auto gen = tokenize(pairs[i].generated);
    PairScores ps{i, {}};
    try {
      for (auto m : metrics) {
        switch (m) {
          case Metric::rouge1: ps.scores.emplace_back(m, rouge_n(ref, gen, 1)); break;
          case Metric::rouge2: ps.scores.emplace_back(m, rouge_n(ref, gen, 2)); break;
          case Metric::rougeL: ps.scores.emplace_back(m, rouge_l(ref, gen)); break;
          case Metric::semantic:
            ps.scores.emplace_back(m, semantic_score(ref, gen, provider));
            break;
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::undefined_input) throw;
      stats.errors.push_back({i, e.what()});
      continue;
    }
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      stats.metrics[k].triples.push_back(ps.scores[k].second);
    }
    kept.push_back(i);
    stats.pairs.push_back(std::move(ps));
  }
  stats.evaluated = kept.size();
  stats.excluded = stats.errors.size();

  for (auto& ms : stats.metrics) {
    std::vector<double> r, p, f;
    for (const auto& t : ms.triples) {
      r.push_back(t.recall);
      p.push_back(t.precision);
      f.push_back(t.f1);
    }
    ms.recall = box_stats(r, kept);
    ms.precision = box_stats(p, kept);
    ms.f1 = box_stats(f, kept);
  }
  return stats;
}

nlohmann::json to_json(const ScoreTriple& s) {
  return {{"recall", s.recall}, {"precision", s.precision}, {"f1", s.f1}};
}

nlohmann::json to_json(const BoxStats& b) {
  return {{"count", b.count},           {"min", b.min},
          {"q1", b.q1},                 {"median", b.median},
          {"q3", b.q3},                 {"max", b.max},
          {"iqr", b.iqr},               {"lower_fence", b.lower_fence},
          {"upper_fence", b.upper_fence}, {"outliers", b.outliers}};
}

nlohmann::json to_json(const CorpusStats& stats) {
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& ms : stats.metrics) {
    metrics[std::string(to_string(ms.metric))] = {{"recall", to_json(ms.recall)},
                                                   {"precision", to_json(ms.precision)},
                                                   {"f1", to_json(ms.f1)}};
  }
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& e : stats.errors) errors.push_back({{"index", e.index}, {"error", e.error}});
  return {{"evaluated", stats.evaluated},
          {"excluded", stats.excluded},
          {"metrics", std::move(metrics)},
          {"errors", std::move(errors)}};
}

std::string per_pair_ndjson(const CorpusStats& stats) {
  std::vector<std::pair<std::size_t, nlohmann::json>> rows;
  for (const auto& ps : stats.pairs) {
    nlohmann::json row = {{"index", ps.index}};
    for (const auto& [m, t] : ps.scores) row[std::string(to_string(m))] = to_json(t);
    rows.emplace_back(ps.index, std::move(row));
  }
  for (const auto& e : stats.errors) {
    rows.emplace_back(e.index, nlohmann::json{{"index", e.index}, {"error", e.error}});
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (const auto& [i, row] : rows) out += row.dump() + "\n";
  return out;
}

std::vector<TextPair> read_pairs_ndjson(std::string_view text) {
  std::vector<TextPair> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back({j.at("reference").get<std::string>(), j.at("generated").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::validation_error,
                  "pairs line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace ehr::metrics
