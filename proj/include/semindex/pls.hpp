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

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "semindex/common.hpp"

namespace semindex {

/// A fitted partial-least-squares aggregation of the keyword score columns.
///
/// Weight directions maximize covariance with the target (SIMPLS); every
/// stored weight column has unit Euclidean norm and operates on the
/// column-standardized predictors. Masked entries are imputed with the
/// estimation-window column mean, which is 0 after centering. Columns that
/// were entirely masked or constant in the window are dropped and recorded.
struct PlsFit {
  std::vector<std::string> column_ids;    // retained columns, fit order
  std::vector<size_t> column_index;       // their indices in the source matrix
  Eigen::VectorXd mean;                   // per retained column
  Eigen::VectorXd sd;                     // per retained column, > 0
  Eigen::MatrixXd weights;                // retained x components, unit-norm cols
  Eigen::VectorXd y_loadings;             // per component
  double y_mean = 0.0;
  int components = 0;
  std::vector<std::string> dropped_columns;

  /// Scores of a raw predictor row (component count entries). Masked cells
  /// carry no information: they standardize to 0.
  Eigen::VectorXd project_all(const std::vector<double>& row,
                              const std::vector<uint8_t>& present) const {
    if (row.size() != present.size()) throw DataError("pls projection row/mask size mismatch");
    Eigen::VectorXd x(column_index.size());
    for (size_t k = 0; k < column_index.size(); ++k) {
      size_t src = column_index[k];
      if (src >= row.size()) throw DataError("pls projection row too short");
      x[static_cast<Eigen::Index>(k)] =
          present[src] ? (row[src] - mean[static_cast<Eigen::Index>(k)]) / sd[static_cast<Eigen::Index>(k)]
                       : 0.0;
    }
    return weights.transpose() * x;
  }

  /// First-component composite score of one row.
  double project(const std::vector<double>& row, const std::vector<uint8_t>& present) const {
    return project_all(row, present)[0];
  }

  std::string to_tsv() const {
    std::string out = "column\tweight";
    for (int a = 1; a < components; ++a) out += "\tweight" + std::to_string(a + 1);
    out += "\tmean\tsd\n";
    for (size_t k = 0; k < column_ids.size(); ++k) {
      out += column_ids[k];
      for (int a = 0; a < components; ++a) {
        out += '\t';
        out += format_double(weights(static_cast<Eigen::Index>(k), a));
      }
      out += '\t';
      out += format_double(mean[static_cast<Eigen::Index>(k)]);
      out += '\t';
      out += format_double(sd[static_cast<Eigen::Index>(k)]);
      out += '\n';
    }
    return out;
  }
};

struct PlsInput {
  // T x K predictor window; row-major like ScoreMatrix, with presence mask.
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<uint8_t>> present;
  std::vector<std::string> column_ids;
  std::vector<double> y;
};

/// Fits `components` SIMPLS factors of the standardized predictors against
/// the centered target. With one component (the reference configuration)
/// the weight vector is the normalized cross-covariance X'y, sign-fixed so
/// the composite correlates non-negatively with y.
inline PlsFit fit_pls(const PlsInput& input, int components = 1) {
  const size_t t_obs = input.rows.size();
  const size_t k_all = input.column_ids.size();
  if (components < 1) throw ConfigError("pls components must be >= 1");
  if (t_obs < 10) throw DataError("pls window too short: " + std::to_string(t_obs));
  if (input.y.size() != t_obs) throw DataError("pls target/window size mismatch");

  PlsFit fit;

  // Column statistics over unmasked cells; all-masked and constant columns
  // are dropped.
  std::vector<double> col_mean(k_all, 0.0), col_sd(k_all, 0.0);
  for (size_t c = 0; c < k_all; ++c) {
    double sum = 0.0;
    size_t n = 0;
    for (size_t r = 0; r < t_obs; ++r) {
      if (!input.present[r][c]) continue;
      sum += input.rows[r][c];
      ++n;
    }
    if (n == 0) {
      fit.dropped_columns.push_back(input.column_ids[c]);
      continue;
    }
    double mean = sum / static_cast<double>(n);
    double var = 0.0;
    for (size_t r = 0; r < t_obs; ++r) {
      if (!input.present[r][c]) continue;
      var += (input.rows[r][c] - mean) * (input.rows[r][c] - mean);
    }
    var /= static_cast<double>(n);
    double sd = std::sqrt(var);
    if (sd <= 0.0) {
      fit.dropped_columns.push_back(input.column_ids[c]);
      continue;
    }
    col_mean[c] = mean;
    col_sd[c] = sd;
    fit.column_index.push_back(c);
    fit.column_ids.push_back(input.column_ids[c]);
  }
  const size_t k = fit.column_index.size();
  if (k == 0) throw DataError("pls: no usable predictor column");

  Eigen::MatrixXd x(static_cast<Eigen::Index>(t_obs), static_cast<Eigen::Index>(k));
  for (size_t r = 0; r < t_obs; ++r)
    for (size_t j = 0; j < k; ++j) {
      size_t c = fit.column_index[j];
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
          input.present[r][c] ? (input.rows[r][c] - col_mean[c]) / col_sd[c] : 0.0;
    }

  Eigen::VectorXd y(static_cast<Eigen::Index>(t_obs));
  for (size_t r = 0; r < t_obs; ++r) y[static_cast<Eigen::Index>(r)] = input.y[r];
  fit.y_mean = y.mean();
  Eigen::VectorXd yc = y.array() - fit.y_mean;
  if (yc.norm() == 0.0) throw DataError("pls: constant target, degenerate fit");

  fit.mean.resize(static_cast<Eigen::Index>(k));
  fit.sd.resize(static_cast<Eigen::Index>(k));
  for (size_t j = 0; j < k; ++j) {
    fit.mean[static_cast<Eigen::Index>(j)] = col_mean[fit.column_index[j]];
    fit.sd[static_cast<Eigen::Index>(j)] = col_sd[fit.column_index[j]];
  }

  const int max_comp = static_cast<int>(std::min<size_t>(static_cast<size_t>(components), k));
  fit.weights.resize(static_cast<Eigen::Index>(k), max_comp);
  fit.y_loadings.resize(max_comp);

  // SIMPLS with a univariate response: the covariance vector is deflated
  // through the orthogonalized loadings.
  Eigen::VectorXd s = x.transpose() * yc;
  Eigen::MatrixXd v_basis(static_cast<Eigen::Index>(k), max_comp);
  const double s_scale = std::max(1.0, yc.norm() * std::sqrt(static_cast<double>(t_obs)));
  int done = 0;
  for (int a = 0; a < max_comp; ++a) {
    if (s.norm() <= 1e-12 * s_scale) {
      if (a == 0) throw DataError("pls: target uncorrelated with every predictor, degenerate fit");
      break;
    }
    Eigen::VectorXd r = s / s.norm();
    Eigen::VectorXd t = x * r;
    double tnorm = t.norm();
    if (tnorm <= 0.0) {
      if (a == 0) throw DataError("pls: zero-variance composite, degenerate fit");
      break;
    }
    double q = yc.dot(t) / (tnorm * tnorm);
    if (a == 0 && q < 0.0) {  // sign convention: composite co-moves with y
      r = -r;
      t = -t;
      q = -q;
    }
    fit.weights.col(a) = r;
    fit.y_loadings[a] = q;
    ++done;

    Eigen::VectorXd p = x.transpose() * t / (tnorm * tnorm);
    Eigen::VectorXd v = p;
    for (int b = 0; b < a; ++b) v -= v_basis.col(b).dot(p) * v_basis.col(b);
    double vnorm = v.norm();
    if (vnorm <= 0.0) break;
    v /= vnorm;
    v_basis.col(a) = v;
    s -= v * (v.dot(s));
  }
  fit.components = done;
  fit.weights.conservativeResize(Eigen::NoChange, done);
  fit.y_loadings.conservativeResize(done);
  return fit;
}

}  // namespace semindex
