// Copyright 2026 The lichenwatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef LICHEN_TIMEUTIL_HPP_
#define LICHEN_TIMEUTIL_HPP_

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>

#include "lichen/error.hpp"

namespace lichen {

/// UTC instant as seconds since the Unix epoch.
using UnixTime = long long;

inline UnixTime make_utc(int year, int month, int day, int hour, int minute, int second = 0) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{unsigned(month)},
                           std::chrono::day{unsigned(day)}};
  if (!ymd.ok()) throw error(errc::parse, "invalid calendar date");
  const sys_days days{ymd};
  return duration_cast<seconds>(days.time_since_epoch()).count() + hour * 3600LL + minute * 60LL +
         second;
}

/// Parses "YYYY-MM-DDTHH:MM:SS" with optional trailing "Z".
inline std::optional<UnixTime> parse_iso8601(const std::string& s) {
  int y, mo, d, h, mi, sec = 0;
  char sep;
  int n = std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &sec);
  if (n < 6 || (sep != 'T' && sep != ' ')) return std::nullopt;
  try {
    return make_utc(y, mo, d, h, mi, sec);
  } catch (const error&) {
    return std::nullopt;
  }
}

inline std::string format_iso8601(UnixTime t) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{t}};
  const sys_days days = floor<std::chrono::days>(tp);
  const year_month_day ymd{days};
  const hh_mm_ss hms{tp - days};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), (long long)hms.hours().count(),
                (long long)hms.minutes().count(), (long long)hms.seconds().count());
  return buf;
}

/// Calendar day index (days since epoch) of a UTC instant.
inline long long utc_day(UnixTime t) {
  // floor division; timestamps before 1970 round toward past days
  return t >= 0 ? t / 86400 : (t - 86399) / 86400;
}

/// Seconds past midnight UTC.
inline long long seconds_of_day(UnixTime t) { return t - utc_day(t) * 86400; }

}  // namespace lichen

#endif  // LICHEN_TIMEUTIL_HPP_
