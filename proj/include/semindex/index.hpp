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

#include <optional>
#include <string>
#include <vector>

#include "semindex/centrality.hpp"
#include "semindex/common.hpp"

namespace semindex {

/// periods x keywords matrix of composite importance scores with an
/// explicit missing-entry mask. An entry is masked exactly when the keyword
/// did not occur in the period (absence is not "average importance", so it
/// is never silently zero-filled).
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::vector<std::string> period_labels, std::vector<std::string> column_ids)
      : periods_(std::move(period_labels)), columns_(std::move(column_ids)),
        values_(periods_.size() * columns_.size(), 0.0),
        present_(periods_.size() * columns_.size(), 0) {}

  size_t n_periods() const { return periods_.size(); }
  size_t n_columns() const { return columns_.size(); }
  const std::vector<std::string>& period_labels() const { return periods_; }
  const std::vector<std::string>& column_ids() const { return columns_; }

  void set(size_t period, size_t col, double v) {
    values_[period * columns_.size() + col] = v;
    present_[period * columns_.size() + col] = 1;
  }
  void set_masked(size_t period, size_t col) {
    values_[period * columns_.size() + col] = 0.0;
    present_[period * columns_.size() + col] = 0;
  }
  bool is_masked(size_t period, size_t col) const {
    return present_[period * columns_.size() + col] == 0;
  }
  double at(size_t period, size_t col) const { return values_[period * columns_.size() + col]; }

  std::optional<double> get(size_t period, size_t col) const {
    if (is_masked(period, col)) return std::nullopt;
    return at(period, col);
  }

  /// TSV serialization: header "period<TAB>id...", masked entries "NA".
  std::string to_tsv() const {
    std::string out = "period";
    for (const auto& c : columns_) {
      out += '\t';
      out += c;
    }
    out += '\n';
    for (size_t p = 0; p < periods_.size(); ++p) {
      out += periods_[p];
      for (size_t c = 0; c < columns_.size(); ++c) {
        out += '\t';
        out += is_masked(p, c) ? "NA" : format_double(at(p, c));
      }
      out += '\n';
    }
    return out;
  }

  static ScoreMatrix from_tsv(const std::string& text, const std::string& origin = "<matrix>") {
    std::vector<std::string> lines;
    for (auto& l : split(text, '\n'))
      if (!trim(l).empty()) lines.push_back(l);
    if (lines.empty()) throw DataError(origin + ": empty score matrix");
    auto header = split(lines[0], '\t');
    if (header.empty() || header[0] != "period")
      throw DataError(origin + ": first column must be 'period'");
    ScoreMatrix m;
    m.columns_.assign(header.begin() + 1, header.end());
    for (size_t i = 1; i < lines.size(); ++i) {
      auto fields = split(lines[i], '\t');
      if (fields.size() != header.size())
        throw DataError(origin + ": row " + std::to_string(i + 1) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
      m.periods_.push_back(fields[0]);
      for (size_t c = 1; c < fields.size(); ++c) {
        if (fields[c] == "NA") {
          m.values_.push_back(0.0);
          m.present_.push_back(0);
        } else {
          double v;
          if (!parse_double(fields[c], v))
            throw DataError(origin + ": bad number '" + fields[c] + "' in row " +
                            std::to_string(i + 1));
          m.values_.push_back(v);
          m.present_.push_back(1);
        }
      }
    }
    return m;
  }

  static ScoreMatrix load_tsv(const std::string& path) { return from_tsv(read_file(path), path); }

 private:
  std::vector<std::string> periods_;
  std::vector<std::string> columns_;
  std::vector<double> values_;   // row-major
  std::vector<uint8_t> present_;
};

/// Composite importance of one keyword in one period: the sum of its three
/// standardized measures; absent keyword -> no value.
inline std::optional<double> compose_score(const NodeMeasures& m, const std::string& erk_id) {
  size_t i = m.index_of(erk_id);
  if (i == static_cast<size_t>(-1)) return std::nullopt;
  return m.z_prev[i] + m.z_div[i] + m.z_conn[i];
}

/// Assembles the periods x keywords score matrix from per-period measures
/// (one entry per calendar period, chronological). Periods without any
/// documents yield fully masked rows.
inline ScoreMatrix build_score_matrix(const std::vector<NodeMeasures>& per_period,
                                      const ErkDictionary& dict,
                                      const std::vector<std::string>& period_labels) {
  if (per_period.size() != period_labels.size())
    throw DataError("measures/periods length mismatch");
  ScoreMatrix matrix(period_labels, dict.ids());
  for (size_t p = 0; p < per_period.size(); ++p) {
    const auto& m = per_period[p];
    for (size_t c = 0; c < dict.size(); ++c) {
      auto score = compose_score(m, dict.entries()[c].id);
      if (score)
        matrix.set(p, c, *score);
      else
        matrix.set_masked(p, c);
    }
  }
  return matrix;
}

}  // namespace semindex
