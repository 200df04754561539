// Copyright 2026 The semindex Authors
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

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "semindex/index.hpp"
#include "semindex/semnet.hpp"
#include "semindex/stemmer_it.hpp"

namespace semindex {

/// Word polarities in [-1, +1], keyed by stemmed token. Entries that
/// collapse to the same stem are averaged; out-of-range polarities are
/// clamped.
class PolarityLexicon {
 public:
  static PolarityLexicon load(const std::string& path, const Stemmer& stemmer) {
    PolarityLexicon lex;
    std::unordered_map<std::string, std::pair<double, int>> sums;
    size_t line_no = 0;
    for (const std::string& raw : read_lines(path)) {
      ++line_no;
      std::string line = trim(raw);
      if (line.empty() || line[0] == '#') continue;
      auto fields = split(line, '\t');
      if (fields.size() != 2)
        throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'token<TAB>polarity'");
      double pol;
      if (!parse_double(trim(fields[1]), pol))
        throw ConfigError(path + ":" + std::to_string(line_no) + ": bad polarity '" + fields[1] + "'");
      pol = std::clamp(pol, -1.0, 1.0);
      auto toks = tokenize(trim(fields[0]));
      if (toks.size() != 1)
        throw ConfigError(path + ":" + std::to_string(line_no) + ": polarity token must be a single word");
      auto& cell = sums[stemmer.apply(toks[0])];
      cell.first += pol;
      cell.second += 1;
    }
    for (const auto& [token, cell] : sums) lex.polarity_[token] = cell.first / cell.second;
    return lex;
  }

  static PolarityLexicon from_map(std::unordered_map<std::string, double> m) {
    PolarityLexicon lex;
    for (auto& [k, v] : m) lex.polarity_[k] = std::clamp(v, -1.0, 1.0);
    return lex;
  }

  std::optional<double> get(const std::string& stemmed_token) const {
    auto it = polarity_.find(stemmed_token);
    if (it == polarity_.end()) return std::nullopt;
    return it->second;
  }
  size_t size() const { return polarity_.size(); }

 private:
  std::unordered_map<std::string, double> polarity_;
};

/// Sentiment of one keyword in one period: co-occurrence-weighted average of
/// the polarities of its direct network neighbors. Neighbors without a
/// lexicon entry are skipped; no polar neighbor at all maps to the neutral 0.
/// Returns nullopt when the keyword is absent from the period network.
inline std::optional<double> erk_sentiment(const CooccurrenceNetwork& net,
                                           const std::string& erk_id,
                                           const PolarityLexicon& lexicon) {
  size_t idx = net.index_of(erk_id);
  if (idx == CooccurrenceNetwork::npos) return std::nullopt;
  double weighted = 0.0, total = 0.0;
  auto [it, end] = net.neighbors(static_cast<uint32_t>(idx));
  for (; it != end; ++it) {
    auto pol = lexicon.get(net.label(it->node));
    if (!pol) continue;
    weighted += static_cast<double>(it->weight) * (*pol);
    total += static_cast<double>(it->weight);
  }
  if (total == 0.0) return 0.0;
  return weighted / total;
}

/// periods x keywords sentiment matrix (same mask convention as the score
/// matrix).
inline ScoreMatrix build_sentiment_matrix(const std::vector<CooccurrenceNetwork>& networks,
                                          const ErkDictionary& dict,
                                          const std::vector<std::string>& period_labels,
                                          const PolarityLexicon& lexicon) {
  if (networks.size() != period_labels.size())
    throw DataError("networks/periods length mismatch");
  ScoreMatrix matrix(period_labels, dict.ids());
  for (size_t p = 0; p < networks.size(); ++p) {
    for (size_t c = 0; c < dict.size(); ++c) {
      auto s = erk_sentiment(networks[p], dict.entries()[c].id, lexicon);
      if (s)
        matrix.set(p, c, *s);
      else
        matrix.set_masked(p, c);
    }
  }
  return matrix;
}

/// Aggregate sentiment index per period: plain mean over the keywords
/// present in the period (stays inside [-1, 1]); periods with no keyword at
/// all are masked.
struct SentimentSeries {
  std::vector<std::string> period_labels;
  std::vector<double> values;
  std::vector<uint8_t> present;
};

inline SentimentSeries aggregate_sentiment(const ScoreMatrix& sentiment_matrix) {
  SentimentSeries out;
  out.period_labels = sentiment_matrix.period_labels();
  out.values.assign(sentiment_matrix.n_periods(), 0.0);
  out.present.assign(sentiment_matrix.n_periods(), 0);
  for (size_t p = 0; p < sentiment_matrix.n_periods(); ++p) {
    double sum = 0.0;
    size_t count = 0;
    for (size_t c = 0; c < sentiment_matrix.n_columns(); ++c) {
      if (sentiment_matrix.is_masked(p, c)) continue;
      sum += sentiment_matrix.at(p, c);
      ++count;
    }
    if (count > 0) {
      out.values[p] = sum / static_cast<double>(count);
      out.present[p] = 1;
    }
  }
  return out;
}

}  // namespace semindex
