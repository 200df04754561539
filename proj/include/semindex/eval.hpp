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

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semindex/common.hpp"
#include "semindex/forecast.hpp"

namespace semindex {

inline double mspe(const std::vector<double>& forecasts, const std::vector<double>& realized) {
  if (forecasts.size() != realized.size()) throw DataError("mspe: length mismatch");
  if (forecasts.empty()) throw DataError("mspe: empty series");
  double sum = 0.0;
  for (size_t i = 0; i < forecasts.size(); ++i) {
    double e = forecasts[i] - realized[i];
    sum += e * e;
  }
  return sum / static_cast<double>(forecasts.size());
}

inline double relative_mspe(double model_mspe, double benchmark_mspe) {
  if (benchmark_mspe == 0.0) throw DataError("relative_mspe: zero benchmark error");
  return model_mspe / benchmark_mspe;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct DmResult {
  double statistic = 0.0;
  double p_value = 0.5;  // one-sided, alternative: model beats benchmark
  int lags = 0;
};

/// Diebold-Mariano test of equal predictive accuracy on squared-error
/// losses, horizon one. The loss differential is d_t = benchmark_t -
/// model_t; the long-run variance uses a Bartlett (Newey-West) kernel with
/// floor(T^(1/3)) lags unless `lags` is >= 0. Positive statistics favor the
/// model; identical losses give (0, 0.5) by convention.
inline DmResult dm_test(const std::vector<double>& loss_model,
                        const std::vector<double>& loss_benchmark, int lags = -1) {
  if (loss_model.size() != loss_benchmark.size()) throw DataError("dm_test: length mismatch");
  const size_t t_obs = loss_model.size();
  if (t_obs < 10) throw DataError("dm_test: needs at least 10 observations");

  std::vector<double> d(t_obs);
  double mean = 0.0;
  for (size_t i = 0; i < t_obs; ++i) {
    d[i] = loss_benchmark[i] - loss_model[i];
    mean += d[i];
  }
  mean /= static_cast<double>(t_obs);

  DmResult res;
  res.lags = lags >= 0 ? lags : static_cast<int>(std::floor(std::cbrt(static_cast<double>(t_obs))));

  double lrv = 0.0;
  for (size_t i = 0; i < t_obs; ++i) lrv += (d[i] - mean) * (d[i] - mean);
  lrv /= static_cast<double>(t_obs);
  for (int l = 1; l <= res.lags; ++l) {
    double g = 0.0;
    for (size_t i = static_cast<size_t>(l); i < t_obs; ++i)
      g += (d[i] - mean) * (d[i - static_cast<size_t>(l)] - mean);
    g /= static_cast<double>(t_obs);
    lrv += 2.0 * (1.0 - static_cast<double>(l) / (res.lags + 1.0)) * g;
  }

  double scale = 0.0;
  for (size_t i = 0; i < t_obs; ++i) scale = std::max(scale, d[i] * d[i]);
  if (lrv <= scale * 1e-30 || lrv <= 0.0) {
    if (mean == 0.0) return res;  // identical losses
    res.statistic = mean > 0.0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
    res.p_value = mean > 0.0 ? 0.0 : 1.0;
    return res;
  }
  res.statistic = mean / std::sqrt(lrv / static_cast<double>(t_obs));
  res.p_value = 1.0 - normal_cdf(res.statistic);
  return res;
}

/// Table-3-style significance stars: ** at 5%, * at 10%.
inline std::string significance_stars(double p_value) {
  if (p_value < 0.05) return "**";
  if (p_value < 0.10) return "*";
  return "";
}

struct ModelEvaluation {
  std::string model;
  double mspe = 0.0;
  double relative = 1.0;       // vs the benchmark; 1.0 for the benchmark itself
  bool is_benchmark = false;
  double dm_statistic = 0.0;   // identically 0 for the benchmark row
  double dm_p = 0.5;
  std::string stars;
};

/// Accuracy evaluation of one backtested target: absolute benchmark MSPE,
/// relative MSPEs with Diebold-Mariano significance for the alternatives,
/// and the per-origin AIC(AR) - AIC(ERK) path.
struct BacktestReport {
  std::string instrument;
  TargetKind kind = TargetKind::ret;
  std::string benchmark;
  std::vector<ModelEvaluation> models;
  std::vector<std::string> origin_labels;
  std::vector<double> aic_diff;  // empty when the ERK model did not run
};

inline BacktestReport evaluate_backtest(const TargetSeries& target, const BacktestResult& result,
                                        int dm_lags = -1) {
  BacktestReport report;
  report.instrument = target.instrument;
  report.kind = target.kind;
  report.benchmark = target.kind == TargetKind::ret ? "RW" : "AR";

  const ForecastRun* bench = nullptr;
  for (const auto& run : result.runs)
    if (model_name(run.model) == report.benchmark) bench = &run;
  if (!bench) throw DataError("report: benchmark model " + report.benchmark + " missing from runs");

  auto losses = [](const ForecastRun& run) {
    std::vector<double> out;
    out.reserve(run.records.size());
    for (const auto& rec : run.records) {
      double e = rec.forecast - rec.realized;
      out.push_back(e * e);
    }
    return out;
  };
  auto series_of = [](const ForecastRun& run) {
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const auto& rec : run.records) {
      out.first.push_back(rec.forecast);
      out.second.push_back(rec.realized);
    }
    return out;
  };

  auto [bf, br] = series_of(*bench);
  const double bench_mspe = mspe(bf, br);
  const auto bench_losses = losses(*bench);

  for (const auto& run : result.runs) {
    ModelEvaluation ev;
    ev.model = model_name(run.model);
    auto [f, r] = series_of(run);
    ev.mspe = mspe(f, r);
    if (&run == bench) {
      ev.is_benchmark = true;
      ev.relative = 1.0;
    } else {
      ev.relative = relative_mspe(ev.mspe, bench_mspe);
      DmResult dm = dm_test(losses(run), bench_losses, dm_lags);
      ev.dm_statistic = dm.statistic;
      ev.dm_p = dm.p_value;
      ev.stars = significance_stars(dm.p_value);
    }
    report.models.push_back(std::move(ev));
  }

  for (size_t i = 0; i < result.origins.size(); ++i)
    report.origin_labels.push_back(target.period_labels[result.origins[i]]);
  if (!result.aic_diff.empty() && result.aic_diff.size() != result.origins.size())
    throw DataError("report: AIC path length does not match the origin count");
  report.aic_diff = result.aic_diff;
  return report;
}

/// Text panel in the layout of the accuracy table: absolute MSPE on the
/// benchmark row, relative MSPE plus stars on the alternatives.
inline std::string render_report_panel(const BacktestReport& report) {
  std::string out;
  out += "Panel " + std::string(report.kind == TargetKind::ret ? "A: Returns" : "B: Volatility");
  out += " [" + report.instrument + "]\n";
  out += "  benchmark: " + report.benchmark + " (absolute MSPE on its row)\n";
  char buf[128];
  for (const auto& ev : report.models) {
    double shown = ev.is_benchmark ? ev.mspe : ev.relative;
    std::snprintf(buf, sizeof(buf), "  %-4s %10.4f %s\n", ev.model.c_str(), shown,
                  ev.stars.c_str());
    out += buf;
  }
  return out;
}

inline nlohmann::json report_to_json(const BacktestReport& report) {
  nlohmann::json j;
  j["instrument"] = report.instrument;
  j["kind"] = target_kind_name(report.kind);
  j["benchmark"] = report.benchmark;
  j["models"] = nlohmann::json::array();
  for (const auto& ev : report.models) {
    nlohmann::json m;
    m["model"] = ev.model;
    m["mspe"] = ev.mspe;
    m["relative_mspe"] = ev.relative;
    m["benchmark"] = ev.is_benchmark;
    if (!ev.is_benchmark) {
      m["dm_statistic"] = ev.dm_statistic;
      m["dm_p_value"] = ev.dm_p;
      m["stars"] = ev.stars;
    }
    j["models"].push_back(std::move(m));
  }
  if (!report.aic_diff.empty()) {
    j["aic_diff"] = nlohmann::json::array();
    for (size_t i = 0; i < report.aic_diff.size(); ++i) {
      j["aic_diff"].push_back({{"origin", report.origin_labels[i]}, {"diff", report.aic_diff[i]}});
    }
  }
  return j;
}

/// Plot-ready CSV of the recursive AIC differences: {origin, diff}.
inline std::string aic_path_to_csv(const BacktestReport& report) {
  std::string out = "origin,diff\n";
  for (size_t i = 0; i < report.aic_diff.size(); ++i) {
    out += report.origin_labels[i];
    out += ',';
    out += format_double(report.aic_diff[i]);
    out += '\n';
  }
  return out;
}

}  // namespace semindex
