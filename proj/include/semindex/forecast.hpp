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
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "semindex/common.hpp"
#include "semindex/index.hpp"
#include "semindex/marketdata.hpp"
#include "semindex/pls.hpp"
#include "semindex/sentiment.hpp"

namespace semindex {

enum class ModelId { RW, AR, ERK, EW, SI };

inline std::string model_name(ModelId m) {
  switch (m) {
    case ModelId::RW: return "RW";
    case ModelId::AR: return "AR";
    case ModelId::ERK: return "ERK";
    case ModelId::EW: return "EW";
    case ModelId::SI: return "SI";
  }
  return "?";
}

inline ModelId parse_model(std::string_view s) {
  if (s == "RW" || s == "rw") return ModelId::RW;
  if (s == "AR" || s == "ar") return ModelId::AR;
  if (s == "ERK" || s == "erk") return ModelId::ERK;
  if (s == "EW" || s == "ew") return ModelId::EW;
  if (s == "SI" || s == "si") return ModelId::SI;
  throw ConfigError("unknown model: " + std::string(s));
}

/// OLS estimates of y_{t+1} = alpha + gamma y_t + beta'x_t + e.
struct ArxFit {
  double alpha = 0.0;
  double gamma = 0.0;
  Eigen::VectorXd beta;  // one entry per exogenous column; empty for AR
  double sigma2 = 0.0;   // residual sum of squares / (T - params)
  size_t t_eff = 0;

  size_t n_params() const { return 2 + static_cast<size_t>(beta.size()); }

  double predict(double y_t, const Eigen::VectorXd& x_t) const {
    if (x_t.size() != beta.size()) throw DataError("arx predict: regressor size mismatch");
    return alpha + gamma * y_t + beta.dot(x_t);
  }
};

/// Least squares on (1, y_t, x_t) -> y_{t+1}. `x_cols` holds one vector per
/// exogenous regressor, aligned so x[i] pairs with y_next[i]. A
/// rank-deficient design is an error that names the offending column.
inline ArxFit fit_arx(const std::vector<double>& y_next, const std::vector<double>& y_lag,
                      const std::vector<std::vector<double>>& x_cols,
                      const std::vector<std::string>& x_names = {}, size_t min_obs = 10) {
  const size_t t_obs = y_next.size();
  if (y_lag.size() != t_obs) throw DataError("arx: lag/target size mismatch");
  for (const auto& c : x_cols)
    if (c.size() != t_obs) throw DataError("arx: regressor length mismatch");
  if (t_obs < min_obs)
    throw DataError("arx: estimation window of " + std::to_string(t_obs) +
                    " observations is below the minimum " + std::to_string(min_obs));
  const size_t j = x_cols.size();
  const size_t p = 2 + j;
  if (t_obs <= p) throw DataError("arx: not enough observations for " + std::to_string(p) + " parameters");

  Eigen::MatrixXd design(static_cast<Eigen::Index>(t_obs), static_cast<Eigen::Index>(p));
  Eigen::VectorXd y(static_cast<Eigen::Index>(t_obs));
  for (size_t i = 0; i < t_obs; ++i) {
    design(static_cast<Eigen::Index>(i), 0) = 1.0;
    design(static_cast<Eigen::Index>(i), 1) = y_lag[i];
    for (size_t c = 0; c < j; ++c)
      design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 + c)) = x_cols[c][i];
    y[static_cast<Eigen::Index>(i)] = y_next[i];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(p)) {
    // Columns past the rank-th pivot are the linearly dependent ones.
    auto perm = qr.colsPermutation().indices();
    std::string offender = "?";
    for (Eigen::Index k = qr.rank(); k < perm.size(); ++k) {
      Eigen::Index col = perm[k];
      if (col == 0) offender = "intercept";
      else if (col == 1) offender = "y_lag";
      else {
        size_t xi = static_cast<size_t>(col - 2);
        offender = xi < x_names.size() ? x_names[xi] : ("x" + std::to_string(xi));
      }
      break;
    }
    throw DataError("arx: rank-deficient design, collinear column: " + offender);
  }

  Eigen::VectorXd coef = qr.solve(y);
  Eigen::VectorXd resid = y - design * coef;

  ArxFit fit;
  fit.alpha = coef[0];
  fit.gamma = coef[1];
  fit.beta = coef.tail(static_cast<Eigen::Index>(j));
  fit.t_eff = t_obs;
  fit.sigma2 = resid.squaredNorm() / static_cast<double>(t_obs - p);
  return fit;
}

/// Equal-weight combination of member forecasts.
inline double combine_equal(const std::vector<double>& forecasts) {
  if (forecasts.empty()) throw DataError("combine_equal: no member forecasts");
  double sum = 0.0;
  for (double f : forecasts) sum += f;
  return sum / static_cast<double>(forecasts.size());
}

/// One-step-ahead point forecast for a fitted (or parameter-free) model.
/// RW forecasts zero for returns (driftless random walk in prices) and
/// no-change for volatility.
inline double forecast_step(ModelId model, TargetKind kind, const ArxFit* fit, double y_t,
                            const Eigen::VectorXd& x_t) {
  switch (model) {
    case ModelId::RW:
      return kind == TargetKind::ret ? 0.0 : y_t;
    case ModelId::AR: {
      if (!fit) throw DataError("forecast_step: AR model not fitted");
      return fit->alpha + fit->gamma * y_t;
    }
    case ModelId::ERK:
    case ModelId::SI:
    case ModelId::EW: {
      if (!fit) throw DataError("forecast_step: model not fitted");
      return fit->predict(y_t, x_t);
    }
  }
  throw DataError("forecast_step: unknown model");
}

struct OriginRecord {
  size_t origin = 0;  // period index of the forecast origin
  double forecast = 0.0;
  double realized = 0.0;
  bool has_coefs = false;
  double alpha = 0.0;
  double gamma = 0.0;
  std::vector<double> beta;
  double sigma2 = 0.0;
};

struct ForecastRun {
  ModelId model = ModelId::RW;
  std::vector<OriginRecord> records;
};

struct BacktestSpec {
  std::vector<ModelId> models{ModelId::RW, ModelId::AR, ModelId::ERK, ModelId::EW, ModelId::SI};
  size_t first_forecast = 0;  // period index of the first forecasted value
  size_t last_forecast = 0;   // inclusive
  size_t min_window = 10;
  int pls_components = 1;
  bool rw_recursive_mean = false;  // sensitivity alternative for returns
};

struct BacktestResult {
  std::vector<ForecastRun> runs;
  std::vector<size_t> origins;
  std::vector<double> aic_diff;       // AIC(AR) - AIC(ERK), one per origin
  bool has_aic_path = false;
  std::vector<PlsFit> pls_fits;       // per origin, when the ERK model ran
  std::vector<std::string> warnings;
};

/// Gaussian AIC up to target-independent constants: T ln(sigma^2) + 2k.
inline double aic(double sigma2, size_t t_eff, size_t k_params) {
  if (sigma2 <= 0.0) throw DataError("aic: non-positive residual variance");
  return static_cast<double>(t_eff) * std::log(sigma2) + 2.0 * static_cast<double>(k_params);
}

namespace detail {

struct PairIndex {
  std::vector<size_t> s;  // estimation pair origins: y[s] and y[s+1] observed
};

// Mean of the unmasked values of `col` over the estimation pair origins.
inline std::optional<double> window_mean(const std::vector<double>& values,
                                         const std::vector<uint8_t>& present,
                                         const std::vector<size_t>& pairs) {
  double sum = 0.0;
  size_t n = 0;
  for (size_t s : pairs) {
    if (!present[s]) continue;
    sum += values[s];
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace detail

/// Recursive expanding-window one-step-ahead backtest.
///
/// For each origin t from (first_forecast - 1) to (last_forecast - 1): all
/// estimated models are refit on pairs (y_s -> y_{s+1}) with s < t, the PLS
/// aggregation is refit on the same vintage, and one forecast of y_{t+1} is
/// emitted per model. Nothing dated after the origin enters any fit.
inline BacktestResult recursive_backtest(const TargetSeries& target, const ScoreMatrix* scores,
                                         const SentimentSeries* sentiment,
                                         const BacktestSpec& spec) {
  BacktestResult result;
  const size_t n = target.size();
  if (spec.first_forecast < 1 || spec.first_forecast > spec.last_forecast)
    throw ConfigError("backtest: invalid forecast range");
  if (spec.last_forecast >= n)
    throw DataError("backtest: forecast range exceeds available data (" +
                    std::to_string(spec.last_forecast) + " >= " + std::to_string(n) + ")");

  bool want_erk = false, want_ew = false, want_si = false;
  for (ModelId m : spec.models) {
    want_erk |= m == ModelId::ERK;
    want_ew |= m == ModelId::EW;
    want_si |= m == ModelId::SI;
  }
  if ((want_erk || want_ew) && !scores)
    throw ConfigError("backtest: ERK/EW models requested without a score matrix");
  if (want_si && !sentiment)
    throw ConfigError("backtest: SI model requested without a sentiment series");
  if (scores && scores->n_periods() != n)
    throw DataError("backtest: score matrix period count differs from target");
  if (sentiment && sentiment->values.size() != n)
    throw DataError("backtest: sentiment series period count differs from target");

  // Fail fast: every forecasted period and origin must be observed, and the
  // first estimation window must already be long enough.
  for (size_t p = spec.first_forecast - 1; p <= spec.last_forecast; ++p)
    if (!target.present[p])
      throw DataError("backtest: target value missing in period " + target.period_labels[p]);

  auto pairs_through = [&](size_t origin) {
    detail::PairIndex idx;
    for (size_t s = 0; s + 1 <= origin; ++s)
      if (target.present[s] && target.present[s + 1]) idx.s.push_back(s);
    return idx;
  };
  {
    const size_t first_origin = spec.first_forecast - 1;
    size_t first_pairs = pairs_through(first_origin).s.size();
    if (first_pairs < spec.min_window)
      throw DataError("backtest: first estimation window has " + std::to_string(first_pairs) +
                      " pairs, minimum is " + std::to_string(spec.min_window));
  }

  for (ModelId m : spec.models) result.runs.push_back(ForecastRun{m, {}});
  result.has_aic_path = want_erk;

  const size_t k_cols = scores ? scores->n_columns() : 0;

  for (size_t t = spec.first_forecast - 1; t <= spec.last_forecast - 1; ++t) {
    result.origins.push_back(t);
    const auto pairs = pairs_through(t);
    const double y_t = target.values[t];
    const double realized = target.values[t + 1];

    std::vector<double> y_next, y_lag;
    y_next.reserve(pairs.s.size());
    y_lag.reserve(pairs.s.size());
    for (size_t s : pairs.s) {
      y_next.push_back(target.values[s + 1]);
      y_lag.push_back(target.values[s]);
    }

    // Shared AR fit: benchmark model and half of the AIC comparison.
    std::optional<ArxFit> ar_fit;
    auto ensure_ar = [&]() -> const ArxFit& {
      if (!ar_fit) ar_fit = fit_arx(y_next, y_lag, {}, {}, spec.min_window);
      return *ar_fit;
    };

    // ERK composite: PLS refit on this vintage, then one regressor column.
    std::optional<ArxFit> erk_fit;
    Eigen::VectorXd erk_x_t;
    if (want_erk) {
      PlsInput pls_in;
      pls_in.column_ids = scores->column_ids();
      for (size_t s : pairs.s) {
        std::vector<double> row(k_cols);
        std::vector<uint8_t> pres(k_cols);
        for (size_t c = 0; c < k_cols; ++c) {
          row[c] = scores->at(s, c);
          pres[c] = scores->is_masked(s, c) ? 0 : 1;
        }
        pls_in.rows.push_back(std::move(row));
        pls_in.present.push_back(std::move(pres));
        pls_in.y.push_back(target.values[s + 1]);
      }
      PlsFit pls = fit_pls(pls_in, spec.pls_components);

      std::vector<std::vector<double>> x_cols(static_cast<size_t>(pls.components));
      for (size_t i = 0; i < pairs.s.size(); ++i) {
        Eigen::VectorXd sc = pls.project_all(pls_in.rows[i], pls_in.present[i]);
        for (int a = 0; a < pls.components; ++a) x_cols[static_cast<size_t>(a)].push_back(sc[a]);
      }
      std::vector<std::string> x_names;
      for (int a = 0; a < pls.components; ++a) x_names.push_back("pls" + std::to_string(a + 1));
      erk_fit = fit_arx(y_next, y_lag, x_cols, x_names, spec.min_window);

      std::vector<double> row_t(k_cols);
      std::vector<uint8_t> pres_t(k_cols);
      for (size_t c = 0; c < k_cols; ++c) {
        row_t[c] = scores->at(t, c);
        pres_t[c] = scores->is_masked(t, c) ? 0 : 1;
      }
      erk_x_t = pls.project_all(row_t, pres_t);
      result.pls_fits.push_back(std::move(pls));
    }

    // SI regressor: the aggregate sentiment series, window-mean imputed.
    std::optional<ArxFit> si_fit;
    double si_x_t = 0.0;
    if (want_si) {
      auto mean = detail::window_mean(sentiment->values, sentiment->present, pairs.s);
      if (!mean)
        throw DataError("backtest: sentiment series entirely missing in estimation window");
      std::vector<double> x;
      x.reserve(pairs.s.size());
      for (size_t s : pairs.s) x.push_back(sentiment->present[s] ? sentiment->values[s] : *mean);
      si_fit = fit_arx(y_next, y_lag, {x}, {"sentiment"}, spec.min_window);
      si_x_t = sentiment->present[t] ? sentiment->values[t] : *mean;
    }

    for (size_t run_idx = 0; run_idx < spec.models.size(); ++run_idx) {
      ModelId m = spec.models[run_idx];
      OriginRecord rec;
      rec.origin = t;
      rec.realized = realized;
      switch (m) {
        case ModelId::RW: {
          if (target.kind == TargetKind::ret && spec.rw_recursive_mean) {
            double sum = 0.0;
            for (size_t s = 0; s <= t; ++s) sum += target.present[s] ? target.values[s] : 0.0;
            size_t cnt = 0;
            for (size_t s = 0; s <= t; ++s) cnt += target.present[s] ? 1 : 0;
            rec.forecast = cnt ? sum / static_cast<double>(cnt) : 0.0;
          } else {
            rec.forecast = forecast_step(m, target.kind, nullptr, y_t, {});
          }
          break;
        }
        case ModelId::AR: {
          const ArxFit& fit = ensure_ar();
          rec.forecast = forecast_step(m, target.kind, &fit, y_t, {});
          rec.has_coefs = true;
          rec.alpha = fit.alpha;
          rec.gamma = fit.gamma;
          rec.sigma2 = fit.sigma2;
          break;
        }
        case ModelId::ERK: {
          rec.forecast = forecast_step(m, target.kind, &*erk_fit, y_t, erk_x_t);
          rec.has_coefs = true;
          rec.alpha = erk_fit->alpha;
          rec.gamma = erk_fit->gamma;
          rec.beta.assign(erk_fit->beta.data(), erk_fit->beta.data() + erk_fit->beta.size());
          rec.sigma2 = erk_fit->sigma2;
          break;
        }
        case ModelId::SI: {
          Eigen::VectorXd x(1);
          x[0] = si_x_t;
          rec.forecast = forecast_step(m, target.kind, &*si_fit, y_t, x);
          rec.has_coefs = true;
          rec.alpha = si_fit->alpha;
          rec.gamma = si_fit->gamma;
          rec.beta.assign(si_fit->beta.data(), si_fit->beta.data() + si_fit->beta.size());
          rec.sigma2 = si_fit->sigma2;
          break;
        }
        case ModelId::EW: {
          std::vector<double> members;
          for (size_t c = 0; c < k_cols; ++c) {
            std::vector<double> col_vals(scores->n_periods(), 0.0);
            std::vector<uint8_t> col_pres(scores->n_periods(), 0);
            for (size_t s = 0; s < scores->n_periods(); ++s) {
              col_vals[s] = scores->at(s, c);
              col_pres[s] = scores->is_masked(s, c) ? 0 : 1;
            }
            auto mean = detail::window_mean(col_vals, col_pres, pairs.s);
            if (!mean) {
              result.warnings.push_back("EW member " + scores->column_ids()[c] +
                                        " skipped at origin " + target.period_labels[t] +
                                        ": column entirely missing");
              continue;
            }
            std::vector<double> x;
            x.reserve(pairs.s.size());
            for (size_t s : pairs.s) x.push_back(col_pres[s] ? col_vals[s] : *mean);
            try {
              ArxFit fit = fit_arx(y_next, y_lag, {x}, {scores->column_ids()[c]}, spec.min_window);
              double x_t = col_pres[t] ? col_vals[t] : *mean;
              Eigen::VectorXd xv(1);
              xv[0] = x_t;
              members.push_back(fit.predict(y_t, xv));
            } catch (const DataError& e) {
              result.warnings.push_back("EW member " + scores->column_ids()[c] +
                                        " skipped at origin " + target.period_labels[t] + ": " +
                                        e.what());
            }
          }
          if (members.empty()) throw DataError("backtest: every EW member failed to fit");
          rec.forecast = combine_equal(members);
          break;
        }
      }
      result.runs[run_idx].records.push_back(std::move(rec));
    }

    if (want_erk) {
      const ArxFit& ar = ensure_ar();
      result.aic_diff.push_back(aic(ar.sigma2, ar.t_eff, ar.n_params()) -
                                aic(erk_fit->sigma2, erk_fit->t_eff, erk_fit->n_params()));
    }
  }
  return result;
}

/// Forecast table serialization: {origin, model, forecast, realized}.
inline std::string forecasts_to_tsv(const BacktestResult& result, const TargetSeries& target) {
  std::string out = "origin\tmodel\tforecast\trealized\n";
  for (const auto& run : result.runs) {
    for (const auto& rec : run.records) {
      out += target.period_labels[rec.origin];
      out += '\t';
      out += model_name(run.model);
      out += '\t';
      out += format_double(rec.forecast);
      out += '\t';
      out += format_double(rec.realized);
      out += '\n';
    }
  }
  return out;
}

}  // namespace semindex
