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

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "semindex/common.hpp"

namespace semindex {

/// Proleptic Gregorian calendar date. Day arithmetic uses the classic
/// civil-from-days / days-from-civil conversions.
struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  friend bool operator==(const CivilDate&, const CivilDate&) = default;
};

/// Days since 1970-01-01.
inline int64_t days_from_civil(const CivilDate& d) {
  int y = d.year;
  const int m = d.month;
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d.day) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

inline CivilDate civil_from_days(int64_t z) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t y = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

enum class Weekday { monday = 0, tuesday, wednesday, thursday, friday, saturday, sunday };

/// Weekday of a day count (1970-01-01 was a Thursday).
inline Weekday weekday_from_days(int64_t z) {
  int64_t wd = (z + 3) % 7;  // 0 = monday
  if (wd < 0) wd += 7;
  return static_cast<Weekday>(wd);
}

inline Weekday parse_weekday(std::string_view name) {
  std::string s;
  for (char c : name) s += static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c);
  if (s == "monday" || s == "mon") return Weekday::monday;
  if (s == "tuesday" || s == "tue") return Weekday::tuesday;
  if (s == "wednesday" || s == "wed") return Weekday::wednesday;
  if (s == "thursday" || s == "thu") return Weekday::thursday;
  if (s == "friday" || s == "fri") return Weekday::friday;
  if (s == "saturday" || s == "sat") return Weekday::saturday;
  if (s == "sunday" || s == "sun") return Weekday::sunday;
  throw ConfigError("unknown weekday: " + std::string(name));
}

inline std::string format_date(const CivilDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

/// UTC timestamp with second resolution.
struct UtcTime {
  int64_t seconds = 0;  // since 1970-01-01T00:00:00Z

  CivilDate date() const {
    int64_t days = seconds / 86400;
    if (seconds < 0 && seconds % 86400 != 0) --days;
    return civil_from_days(days);
  }
  friend auto operator<=>(const UtcTime&, const UtcTime&) = default;
};

namespace detail {
inline bool parse_int_field(std::string_view s, size_t pos, size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}
}  // namespace detail

inline CivilDate parse_date(std::string_view s) {
  int y, m, d;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
      !detail::parse_int_field(s, 0, 4, y) || !detail::parse_int_field(s, 5, 2, m) ||
      !detail::parse_int_field(s, 8, 2, d))
    throw DataError("invalid date: " + std::string(s));
  if (m < 1 || m > 12 || d < 1 || d > 31) throw DataError("invalid date: " + std::string(s));
  return CivilDate{y, m, d};
}

/// Parses an ISO-8601 timestamp: date, optional time ('T' or ' ' separator),
/// optional 'Z' or +-hh:mm offset. Offsets are converted to UTC.
inline UtcTime parse_iso8601(std::string_view s) {
  if (s.size() < 10) throw DataError("invalid timestamp: " + std::string(s));
  CivilDate date = parse_date(s.substr(0, 10));
  int64_t secs = days_from_civil(date) * 86400;
  size_t pos = 10;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
    int hh, mm, ss = 0;
    if (!detail::parse_int_field(s, pos + 1, 2, hh) || s.size() < pos + 6 || s[pos + 3] != ':' ||
        !detail::parse_int_field(s, pos + 4, 2, mm))
      throw DataError("invalid timestamp: " + std::string(s));
    pos += 6;
    if (pos < s.size() && s[pos] == ':') {
      if (!detail::parse_int_field(s, pos + 1, 2, ss))
        throw DataError("invalid timestamp: " + std::string(s));
      pos += 3;
    }
    if (hh > 23 || mm > 59 || ss > 60) throw DataError("invalid timestamp: " + std::string(s));
    secs += hh * 3600 + mm * 60 + ss;
  }
  if (pos < s.size()) {
    char c = s[pos];
    if (c == 'Z' && pos + 1 == s.size()) {
      // already UTC
    } else if (c == '+' || c == '-') {
      int oh, om = 0;
      if (!detail::parse_int_field(s, pos + 1, 2, oh))
        throw DataError("invalid timestamp offset: " + std::string(s));
      size_t opos = pos + 3;
      if (opos < s.size() && s[opos] == ':') ++opos;
      if (opos < s.size() && !detail::parse_int_field(s, opos, 2, om))
        throw DataError("invalid timestamp offset: " + std::string(s));
      int64_t off = oh * 3600 + om * 60;
      secs += (c == '+') ? -off : off;
    } else {
      throw DataError("invalid timestamp: " + std::string(s));
    }
  }
  return UtcTime{secs};
}

enum class Frequency { weekly, daily };

inline Frequency parse_frequency(std::string_view s) {
  if (s == "weekly") return Frequency::weekly;
  if (s == "daily") return Frequency::daily;
  throw ConfigError("unknown frequency: " + std::string(s));
}

/// Contiguous, non-overlapping time buckets covering [start, end].
///
/// Weekly periods span the seven days ending on the anchor weekday; a
/// timestamp on day D belongs to the period whose anchor is the first
/// anchor-weekday on or after D. Weekly period ids print the last five days
/// of the period ("monday/friday" for the default Friday anchor, the
/// business-week convention used for financial series). Daily period ids are
/// plain dates.
class PeriodCalendar {
 public:
  PeriodCalendar() = default;
  PeriodCalendar(Frequency freq, Weekday anchor, CivilDate start, CivilDate end)
      : freq_(freq), anchor_(anchor), start_days_(days_from_civil(start)),
        end_days_(days_from_civil(end)) {
    if (end_days_ < start_days_)
      throw ConfigError("calendar range end precedes start: " + format_date(start) + " .. " +
                        format_date(end));
    if (freq_ == Frequency::weekly) {
      first_anchor_ = next_anchor(start_days_);
      n_periods_ = static_cast<size_t>((next_anchor(end_days_) - first_anchor_) / 7) + 1;
    } else {
      first_anchor_ = start_days_;
      n_periods_ = static_cast<size_t>(end_days_ - start_days_) + 1;
    }
  }

  size_t size() const { return n_periods_; }
  Frequency frequency() const { return freq_; }
  CivilDate start_date() const { return civil_from_days(start_days_); }
  CivilDate end_date() const { return civil_from_days(end_days_); }

  /// Index of the period containing the timestamp; throws when the timestamp
  /// date falls outside [start, end].
  size_t period_of(UtcTime t) const {
    int64_t day = days_from_civil(t.date());
    if (day < start_days_ || day > end_days_)
      throw DataError("timestamp " + format_date(t.date()) + " outside calendar range " +
                      format_date(civil_from_days(start_days_)) + " .. " +
                      format_date(civil_from_days(end_days_)));
    if (freq_ == Frequency::weekly)
      return static_cast<size_t>((next_anchor(day) - first_anchor_) / 7);
    return static_cast<size_t>(day - start_days_);
  }

  /// Last day (inclusive) covered by the period.
  CivilDate period_end(size_t idx) const {
    check(idx);
    if (freq_ == Frequency::weekly) return civil_from_days(first_anchor_ + static_cast<int64_t>(idx) * 7);
    return civil_from_days(start_days_ + static_cast<int64_t>(idx));
  }

  std::string label(size_t idx) const {
    check(idx);
    if (freq_ == Frequency::daily) return format_date(period_end(idx));
    int64_t end = first_anchor_ + static_cast<int64_t>(idx) * 7;
    return format_date(civil_from_days(end - 4)) + "/" + format_date(civil_from_days(end));
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(n_periods_);
    for (size_t i = 0; i < n_periods_; ++i) out.push_back(label(i));
    return out;
  }

  /// Index of the period whose last covered day is `d`; throws if `d` is not
  /// a period end.
  size_t index_of_period_ending(const CivilDate& d) const {
    int64_t day = days_from_civil(d);
    if (freq_ == Frequency::weekly) {
      if (weekday_from_days(day) != anchor_ || day < first_anchor_)
        throw ConfigError("date " + format_date(d) + " is not a period end");
      size_t idx = static_cast<size_t>((day - first_anchor_) / 7);
      if (idx >= n_periods_)
        throw ConfigError("date " + format_date(d) + " is outside the calendar range");
      return idx;
    }
    if (day < start_days_ || day > end_days_)
      throw ConfigError("date " + format_date(d) + " is not a period end");
    return static_cast<size_t>(day - start_days_);
  }

 private:
  int64_t next_anchor(int64_t day) const {
    int64_t delta = (static_cast<int64_t>(anchor_) - static_cast<int64_t>(weekday_from_days(day)) + 7) % 7;
    return day + delta;
  }
  void check(size_t idx) const {
    if (idx >= n_periods_) throw DataError("period index out of range");
  }

  Frequency freq_ = Frequency::weekly;
  Weekday anchor_ = Weekday::friday;
  int64_t start_days_ = 0;
  int64_t end_days_ = 0;
  int64_t first_anchor_ = 0;
  size_t n_periods_ = 0;
};

}  // namespace semindex
