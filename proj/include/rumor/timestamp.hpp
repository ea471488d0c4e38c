#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace rumor {

/// An instant plus the UTC offset it was written with.
struct Timestamp {
  std::int64_t epoch_seconds = 0;  // UTC
  int offset_minutes = 0;          // offset of the original notation

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
  friend auto operator<=>(const Timestamp& a, const Timestamp& b) {
    return a.epoch_seconds <=> b.epoch_seconds;
  }
};

/// Parses an RFC 3339 date-time ("2020-03-02T10:15:00+08:00", "...Z",
/// optional fractional seconds, which are truncated). Throws InvalidArgument.
Timestamp parse_rfc3339(std::string_view text);

/// Formats in the timestamp's own offset, e.g. "2020-03-02T10:15:00+08:00".
std::string format_rfc3339(const Timestamp& ts);

/// Parses "+08:00", "-05:30", "Z" or "+0800" into minutes east of UTC.
int parse_utc_offset(std::string_view text);
std::string format_utc_offset(int offset_minutes);

/// Calendar day of the instant as seen at the given offset.
std::chrono::sys_days local_day(std::int64_t epoch_seconds, int offset_minutes);

/// Monday of the ISO week containing `day`.
std::chrono::sys_days week_start(std::chrono::sys_days day);

/// "YYYY-MM-DD".
std::string format_date(std::chrono::sys_days day);

}  // namespace rumor
