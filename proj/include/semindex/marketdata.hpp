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
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "semindex/common.hpp"
#include "semindex/dates.hpp"

namespace semindex {

struct PriceBar {
  CivilDate date;
  double close = 0.0;
  double high = 0.0;
  double low = 0.0;
};

/// Daily bars of one instrument, dates strictly increasing. The close is
/// allowed to print outside the intraday range (index data does), but
/// high >= low and positive prices are enforced.
struct PriceSeries {
  std::string instrument;
  std::vector<PriceBar> bars;
};

inline PriceSeries load_price_csv(const std::string& path, const std::string& instrument) {
  auto lines = read_lines(path);
  if (lines.empty()) throw DataError(path + ": empty price file");
  auto header = split(trim(lines[0]), ',');
  int c_date = -1, c_close = -1, c_high = -1, c_low = -1;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    std::string h = trim(header[i]);
    if (h == "date") c_date = i;
    else if (h == "close") c_close = i;
    else if (h == "high") c_high = i;
    else if (h == "low") c_low = i;
  }
  if (c_date < 0 || c_close < 0 || c_high < 0 || c_low < 0)
    throw DataError(path + ": header must contain date, close, high, low");

  PriceSeries series;
  series.instrument = instrument;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto f = split(lines[i], ',');
    if (f.size() < header.size())
      throw DataError(path + ":" + std::to_string(i + 1) + ": short row");
    PriceBar bar;
    bar.date = parse_date(trim(f[static_cast<size_t>(c_date)]));
    if (!parse_double(trim(f[static_cast<size_t>(c_close)]), bar.close) ||
        !parse_double(trim(f[static_cast<size_t>(c_high)]), bar.high) ||
        !parse_double(trim(f[static_cast<size_t>(c_low)]), bar.low))
      throw DataError(path + ":" + std::to_string(i + 1) + ": bad number");
    if (bar.close <= 0.0 || bar.high <= 0.0 || bar.low <= 0.0)
      throw DataError(path + ":" + std::to_string(i + 1) + ": non-positive price");
    if (bar.high < bar.low)
      throw DataError(path + ":" + std::to_string(i + 1) + ": high below low");
    if (!series.bars.empty() &&
        days_from_civil(bar.date) <= days_from_civil(series.bars.back().date))
      throw DataError(path + ":" + std::to_string(i + 1) + ": dates not strictly increasing");
    series.bars.push_back(bar);
  }
  if (series.bars.empty()) throw DataError(path + ": no price rows");
  return series;
}

enum class TargetKind { ret, realized_volatility };

inline std::string target_kind_name(TargetKind k) {
  return k == TargetKind::ret ? "return" : "volatility";
}

inline TargetKind parse_target_kind(std::string_view s) {
  if (s == "return" || s == "returns") return TargetKind::ret;
  if (s == "volatility" || s == "rv" || s == "realized-volatility")
    return TargetKind::realized_volatility;
  throw ConfigError("unknown target kind: " + std::string(s));
}

/// A weekly financial series aligned to the period calendar; weeks without
/// any trading day (and the first week, for returns) are masked.
struct TargetSeries {
  std::string instrument;
  TargetKind kind = TargetKind::ret;
  std::vector<std::string> period_labels;
  std::vector<double> values;
  std::vector<uint8_t> present;

  size_t size() const { return values.size(); }

  std::string to_tsv() const {
    std::string out = "period\tvalue\n";
    for (size_t i = 0; i < values.size(); ++i) {
      out += period_labels[i];
      out += '\t';
      out += present[i] ? format_double(values[i]) : "NA";
      out += '\n';
    }
    return out;
  }

  static TargetSeries from_tsv(const std::string& text, const std::string& instrument,
                               TargetKind kind, const std::string& origin = "<target>") {
    TargetSeries t;
    t.instrument = instrument;
    t.kind = kind;
    auto lines = split(text, '\n');
    bool saw_header = false;
    for (size_t i = 0; i < lines.size(); ++i) {
      std::string line = trim(lines[i]);
      if (line.empty()) continue;
      auto f = split(lines[i], '\t');
      if (!saw_header) {
        if (f.size() != 2 || f[0] != "period" || f[1] != "value")
          throw DataError(origin + ": expected 'period<TAB>value' header");
        saw_header = true;
        continue;
      }
      if (f.size() != 2) throw DataError(origin + ": bad row " + std::to_string(i + 1));
      t.period_labels.push_back(f[0]);
      if (f[1] == "NA") {
        t.values.push_back(0.0);
        t.present.push_back(0);
      } else {
        double v;
        if (!parse_double(f[1], v))
          throw DataError(origin + ": bad number '" + f[1] + "' in row " + std::to_string(i + 1));
        t.values.push_back(v);
        t.present.push_back(1);
      }
    }
    if (!saw_header) throw DataError(origin + ": empty target file");
    return t;
  }
};

namespace detail {

// Last close per period, NaN when the period has no trading day.
inline std::vector<double> period_last_close(const PriceSeries& prices,
                                             const PeriodCalendar& calendar) {
  std::vector<double> close(calendar.size(), std::numeric_limits<double>::quiet_NaN());
  for (const auto& bar : prices.bars) {
    size_t p = calendar.period_of(UtcTime{days_from_civil(bar.date) * 86400});
    close[p] = bar.close;  // bars are date-ordered, so the last write wins
  }
  return close;
}

}  // namespace detail

/// Weekly log returns in percent: 100 * ln(close_t / close_{t-1}) between
/// the last trading days of consecutive periods. The first period and any
/// period without trades (or following one without trades) are masked.
inline TargetSeries weekly_log_return(const PriceSeries& prices, const PeriodCalendar& calendar) {
  TargetSeries out;
  out.instrument = prices.instrument;
  out.kind = TargetKind::ret;
  out.period_labels = calendar.labels();
  out.values.assign(calendar.size(), 0.0);
  out.present.assign(calendar.size(), 0);

  auto close = detail::period_last_close(prices, calendar);
  for (size_t p = 1; p < calendar.size(); ++p) {
    if (std::isnan(close[p]) || std::isnan(close[p - 1])) continue;
    out.values[p] = 100.0 * std::log(close[p] / close[p - 1]);
    out.present[p] = 1;
  }
  return out;
}

/// Range variance estimate from one period's extreme prices, in raw log^2
/// units: (ln(H/L))^2 / (4 ln 2).
inline double parkinson_raw(double high, double low) {
  if (low <= 0.0) throw DataError("parkinson estimator needs positive prices");
  if (high < low) throw DataError("parkinson estimator needs high >= low");
  const double r = std::log(high / low);
  return r * r / (4.0 * std::numbers::ln2);
}

/// Weekly realized volatility by the range estimator: weekly high over
/// weekly low, scaled by `scale` to pick the percent convention. The default
/// 1e4 matches percent returns (equivalent to using 100*ln(H/L)); pass 1e2
/// for magnitudes in run-of-the-mill descriptive tables.
inline TargetSeries parkinson_rv(const PriceSeries& prices, const PeriodCalendar& calendar,
                                 double scale = 1e4) {
  TargetSeries out;
  out.instrument = prices.instrument;
  out.kind = TargetKind::realized_volatility;
  out.period_labels = calendar.labels();
  out.values.assign(calendar.size(), 0.0);
  out.present.assign(calendar.size(), 0);

  std::vector<double> hi(calendar.size(), 0.0), lo(calendar.size(), 0.0);
  std::vector<uint8_t> seen(calendar.size(), 0);
  for (const auto& bar : prices.bars) {
    size_t p = calendar.period_of(UtcTime{days_from_civil(bar.date) * 86400});
    if (!seen[p]) {
      hi[p] = bar.high;
      lo[p] = bar.low;
      seen[p] = 1;
    } else {
      hi[p] = std::max(hi[p], bar.high);
      lo[p] = std::min(lo[p], bar.low);
    }
  }
  for (size_t p = 0; p < calendar.size(); ++p) {
    if (!seen[p]) continue;
    out.values[p] = scale * parkinson_raw(hi[p], lo[p]);
    out.present[p] = 1;
  }
  return out;
}

}  // namespace semindex
