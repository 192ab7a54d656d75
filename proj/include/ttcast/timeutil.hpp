#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ttcast {

struct CivilDate {
  int year = 1970;
  unsigned month = 1;  // 1..12
  unsigned day = 1;    // 1..31
};

// Proleptic Gregorian calendar <-> days since 1970-01-01 (UTC).
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
CivilDate civil_from_days(std::int64_t days);

// 0 = Sunday .. 6 = Saturday.
int weekday_from_days(std::int64_t days);

// Accepts "YYYY-MM-DD HH:MM:SS" or "YYYY-MM-DDTHH:MM:SS", optional trailing
// 'Z'; seconds optional. Returns epoch seconds UTC. Throws DataError on
// malformed input.
std::int64_t parse_iso8601_utc(std::string_view s);

std::string format_iso8601_utc(std::int64_t epoch_seconds);

// Floor division for epoch arithmetic with negative-safe semantics.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace ttcast
