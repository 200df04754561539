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

#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <random>

#include "semindex/marketdata.hpp"

using namespace semindex;

namespace {

// Trading days Mon-Fri over the calendar, one bar per day.
PriceSeries flat_series(const PeriodCalendar& cal, double price) {
  PriceSeries s;
  s.instrument = "test";
  int64_t start = days_from_civil(cal.start_date());
  int64_t end = days_from_civil(cal.end_date());
  for (int64_t d = start; d <= end; ++d) {
    Weekday wd = weekday_from_days(d);
    if (wd == Weekday::saturday || wd == Weekday::sunday) continue;
    s.bars.push_back({civil_from_days(d), price, price, price});
  }
  return s;
}

PeriodCalendar march_cal() {
  return PeriodCalendar(Frequency::weekly, Weekday::friday, {2020, 3, 2}, {2020, 3, 27});
}

}  // namespace

TEST_CASE("flat prices give zero returns after the first period") {
  auto cal = march_cal();
  auto t = weekly_log_return(flat_series(cal, 100.0), cal);
  REQUIRE(t.size() == cal.size());
  CHECK(t.present[0] == 0);  // first period dropped
  for (size_t p = 1; p < t.size(); ++p) {
    CHECK(t.present[p] == 1);
    CHECK(t.values[p] == 0.0);
  }
}

TEST_CASE("ten percent close move gives 100*ln(1.1)") {
  auto cal = march_cal();
  PriceSeries s = flat_series(cal, 100.0);
  // bump every close from the second week onward to 110
  for (auto& bar : s.bars)
    if (days_from_civil(bar.date) >= days_from_civil({2020, 3, 9})) bar.close = 110.0;
  auto t = weekly_log_return(s, cal);
  CHECK_THAT(t.values[1], Catch::Matchers::WithinAbs(9.531017980432493, 1e-10));
  CHECK(t.values[2] == 0.0);
}

TEST_CASE("weeks without trading days are masked") {
  auto cal = march_cal();
  PriceSeries s = flat_series(cal, 100.0);
  // delete the second week's bars entirely
  std::erase_if(s.bars, [](const PriceBar& b) {
    int64_t d = days_from_civil(b.date);
    return d >= days_from_civil({2020, 3, 9}) && d <= days_from_civil({2020, 3, 13});
  });
  auto t = weekly_log_return(s, cal);
  CHECK(t.present[1] == 0);  // empty week
  CHECK(t.present[2] == 0);  // previous close missing
  CHECK(t.present[3] == 1);
}

TEST_CASE("returns telescope over consecutive weeks") {
  auto cal = PeriodCalendar(Frequency::weekly, Weekday::friday, {2020, 1, 6}, {2020, 3, 27});
  PriceSeries s = flat_series(cal, 100.0);
  // drifting close: +0.3% per trading day
  double px = 100.0;
  for (auto& bar : s.bars) {
    px *= 1.003;
    bar.close = bar.high = bar.low = px;
  }
  auto t = weekly_log_return(s, cal);
  double sum = 0.0;
  for (size_t p = 1; p < t.size(); ++p) {
    REQUIRE(t.present[p] == 1);
    sum += t.values[p];
  }
  // last closes of first and final weeks
  double first_close = 0.0, last_close = 0.0;
  for (const auto& bar : s.bars) {
    size_t p = cal.period_of(UtcTime{days_from_civil(bar.date) * 86400});
    if (p == 0) first_close = bar.close;
    last_close = bar.close;
  }
  CHECK_THAT(sum, Catch::Matchers::WithinAbs(100.0 * std::log(last_close / first_close), 1e-10));
}

TEST_CASE("parkinson identities") {
  CHECK(parkinson_raw(100.0, 100.0) == 0.0);
  // H/L = e gives 1/(4 ln 2) in raw units
  CHECK_THAT(parkinson_raw(100.0 * std::exp(1.0), 100.0),
             Catch::Matchers::WithinAbs(0.360673760222241, 1e-10));
  CHECK_THAT(1e4 * parkinson_raw(102.0, 98.0),
             Catch::Matchers::WithinAbs(5.772319510342546, 1e-9));
  CHECK_THROWS_AS(parkinson_raw(98.0, 102.0), DataError);
  CHECK_THROWS_AS(parkinson_raw(10.0, 0.0), DataError);
}

TEST_CASE("parkinson is invariant to price rescaling") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    double low = 50.0 + (rng() % 1000) / 10.0;
    double high = low * (1.0 + (rng() % 100) / 500.0);
    double k = 0.1 + (rng() % 100) / 10.0;
    CHECK_THAT(parkinson_raw(k * high, k * low),
               Catch::Matchers::WithinAbs(parkinson_raw(high, low), 1e-12));
  }
}

TEST_CASE("weekly parkinson uses the weekly extremes") {
  auto cal = march_cal();
  PriceSeries s = flat_series(cal, 100.0);
  // second week: highs/lows vary by day; weekly range is 108/96
  for (auto& bar : s.bars) {
    int64_t d = days_from_civil(bar.date);
    if (d == days_from_civil({2020, 3, 10})) {
      bar.high = 108.0;
      bar.low = 99.0;
    } else if (d == days_from_civil({2020, 3, 12})) {
      bar.high = 101.0;
      bar.low = 96.0;
    }
  }
  auto t = parkinson_rv(s, cal, 1e4);
  REQUIRE(t.present[1] == 1);
  CHECK_THAT(t.values[1], Catch::Matchers::WithinAbs(1e4 * parkinson_raw(108.0, 96.0), 1e-12));
  CHECK(t.values[0] == 0.0);  // flat week
  CHECK(t.values[2] == 0.0);
  for (size_t p = 0; p < t.size(); ++p) CHECK(t.values[p] >= 0.0);
}

TEST_CASE("rv scale knob switches percent conventions") {
  auto cal = march_cal();
  PriceSeries s = flat_series(cal, 100.0);
  s.bars[6].high = 105.0;
  s.bars[6].low = 95.0;
  auto t4 = parkinson_rv(s, cal, 1e4);
  auto t2 = parkinson_rv(s, cal, 1e2);
  size_t p = cal.period_of(UtcTime{days_from_civil(s.bars[6].date) * 86400});
  CHECK_THAT(t4.values[p], Catch::Matchers::WithinAbs(100.0 * t2.values[p], 1e-12));
}

TEST_CASE("price csv loader validates structure") {
  auto path = std::filesystem::temp_directory_path() / "semindex_prices_test.csv";
  write_file(path.string(),
             "date,close,high,low\n"
             "2020-03-02,100,101,99\n"
             "2020-03-03,102,103,100\n");
  PriceSeries s = load_price_csv(path.string(), "abc");
  CHECK(s.instrument == "abc");
  REQUIRE(s.bars.size() == 2);
  CHECK(s.bars[1].close == 102.0);

  write_file(path.string(), "date,close\n2020-03-02,100\n");
  CHECK_THROWS_AS(load_price_csv(path.string(), "abc"), DataError);
  write_file(path.string(), "date,close,high,low\n2020-03-02,100,99,101\n");
  CHECK_THROWS_AS(load_price_csv(path.string(), "abc"), DataError);  // high < low
  write_file(path.string(),
             "date,close,high,low\n2020-03-03,100,101,99\n2020-03-02,100,101,99\n");
  CHECK_THROWS_AS(load_price_csv(path.string(), "abc"), DataError);  // dates not increasing
  write_file(path.string(), "date,close,high,low\n2020-03-02,-5,101,99\n");
  CHECK_THROWS_AS(load_price_csv(path.string(), "abc"), DataError);
  std::filesystem::remove(path);
}

TEST_CASE("target series round-trips through TSV") {
  auto cal = march_cal();
  auto t = weekly_log_return(flat_series(cal, 100.0), cal);
  std::string tsv = t.to_tsv();
  TargetSeries back = TargetSeries::from_tsv(tsv, "test", TargetKind::ret);
  CHECK(back.period_labels == t.period_labels);
  CHECK(back.present == t.present);
  for (size_t i = 0; i < t.size(); ++i)
    if (t.present[i]) CHECK_THAT(back.values[i], Catch::Matchers::WithinAbs(t.values[i], 1e-10));
}
