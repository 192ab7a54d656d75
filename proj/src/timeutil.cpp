#include "ttcast/timeutil.hpp"

#include <charconv>
#include <cstdio>

#include "ttcast/errors.hpp"

namespace ttcast {

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return CivilDate{static_cast<int>(y + (m <= 2)), m, d};
}

int weekday_from_days(std::int64_t days) {
  // 1970-01-01 was a Thursday.
  return static_cast<int>(((days % 7) + 7 + 4) % 7);
}

namespace {

int parse_int(std::string_view s, std::size_t pos, std::size_t len, const char* what) {
  if (pos + len > s.size()) throw DataError(std::string("timestamp too short for ") + what);
  int value = 0;
  const char* first = s.data() + pos;
  const auto res = std::from_chars(first, first + len, value);
  if (res.ec != std::errc{} || res.ptr != first + len) {
    throw DataError(std::string("bad ") + what + " in timestamp '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

std::int64_t parse_iso8601_utc(std::string_view s) {
  if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
  if (s.size() < 16) throw DataError("timestamp '" + std::string(s) + "' is not ISO-8601");
  const int year = parse_int(s, 0, 4, "year");
  const int month = parse_int(s, 5, 2, "month");
  const int day = parse_int(s, 8, 2, "day");
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ')) {
    throw DataError("timestamp '" + std::string(s) + "' is not ISO-8601");
  }
  const int hour = parse_int(s, 11, 2, "hour");
  if (s[13] != ':') throw DataError("timestamp '" + std::string(s) + "' is not ISO-8601");
  const int minute = parse_int(s, 14, 2, "minute");
  int second = 0;
  if (s.size() > 16) {
    if (s[16] != ':' || s.size() < 19) {
      throw DataError("timestamp '" + std::string(s) + "' is not ISO-8601");
    }
    second = parse_int(s, 17, 2, "second");
  }
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 ||
      second > 60) {
    throw DataError("timestamp '" + std::string(s) + "' has out-of-range fields");
  }
  const std::int64_t days =
      days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  return days * 86400 + hour * 3600 + minute * 60 + second;
}

std::string format_iso8601_utc(std::int64_t t) {
  const std::int64_t days = floor_div(t, 86400);
  const std::int64_t sod = t - days * 86400;
  const CivilDate d = civil_from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", d.year, d.month,
                d.day, static_cast<long long>(sod / 3600),
                static_cast<long long>((sod / 60) % 60), static_cast<long long>(sod % 60));
  return buf;
}

}  // namespace ttcast
