#include "rumor/timestamp.hpp"

#include <charconv>
#include <cstdio>

#include "rumor/common.hpp"

namespace rumor {
namespace {

int parse_fixed(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
  int value = 0;
  if (pos + len > text.size()) throw InvalidArgument("truncated timestamp: " + std::string(whole));
  const char* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || ptr != first + len) {
    throw InvalidArgument("malformed timestamp: " + std::string(whole));
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char c, std::string_view whole) {
  if (pos >= text.size() || text[pos] != c) {
    throw InvalidArgument("malformed timestamp: " + std::string(whole));
  }
}

}  // namespace

int parse_utc_offset(std::string_view text) {
  if (text == "Z" || text == "z") return 0;
  if (text.size() != 6 && text.size() != 5) throw InvalidArgument("malformed UTC offset: " + std::string(text));
  if (text[0] != '+' && text[0] != '-') throw InvalidArgument("malformed UTC offset: " + std::string(text));
  const int hours = parse_fixed(text, 1, 2, text);
  std::size_t mpos = 3;
  if (text.size() == 6) {
    expect(text, 3, ':', text);
    mpos = 4;
  }
  const int minutes = parse_fixed(text, mpos, 2, text);
  if (hours > 23 || minutes > 59) throw InvalidArgument("UTC offset out of range: " + std::string(text));
  const int total = hours * 60 + minutes;
  return text[0] == '-' ? -total : total;
}

std::string format_utc_offset(int offset_minutes) {
  const char sign = offset_minutes < 0 ? '-' : '+';
  const int a = offset_minutes < 0 ? -offset_minutes : offset_minutes;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%02d:%02d", sign, a / 60, a % 60);
  return buf;
}

Timestamp parse_rfc3339(std::string_view text) {
  using namespace std::chrono;
  // YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM)
  const int y = parse_fixed(text, 0, 4, text);
  expect(text, 4, '-', text);
  const int mo = parse_fixed(text, 5, 2, text);
  expect(text, 7, '-', text);
  const int d = parse_fixed(text, 8, 2, text);
  if (text.size() <= 10 || (text[10] != 'T' && text[10] != 't' && text[10] != ' ')) {
    throw InvalidArgument("malformed timestamp: " + std::string(text));
  }
  const int h = parse_fixed(text, 11, 2, text);
  expect(text, 13, ':', text);
  const int mi = parse_fixed(text, 14, 2, text);
  expect(text, 16, ':', text);
  const int s = parse_fixed(text, 17, 2, text);
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) throw InvalidArgument("malformed timestamp: " + std::string(text));
  }
  if (pos >= text.size()) throw InvalidArgument("timestamp lacks UTC offset: " + std::string(text));
  const int offset = parse_utc_offset(text.substr(pos));

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
    throw InvalidArgument("timestamp out of range: " + std::string(text));
  }
  const auto local = sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi} + seconds{s};
  const auto utc = duration_cast<seconds>(local) - minutes{offset};
  return Timestamp{utc.count(), offset};
}

std::string format_rfc3339(const Timestamp& ts) {
  using namespace std::chrono;
  const std::int64_t local = ts.epoch_seconds + std::int64_t{ts.offset_minutes} * 60;
  const auto days_part = floor<days>(seconds{local});
  const year_month_day ymd{sys_days{days_part}};
  const std::int64_t secs = local - duration_cast<seconds>(days_part).count();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(secs / 3600), static_cast<int>(secs / 60 % 60), static_cast<int>(secs % 60));
  return std::string(buf) + format_utc_offset(ts.offset_minutes);
}

std::chrono::sys_days local_day(std::int64_t epoch_seconds, int offset_minutes) {
  using namespace std::chrono;
  const std::int64_t local = epoch_seconds + std::int64_t{offset_minutes} * 60;
  return sys_days{floor<days>(seconds{local})};
}

std::chrono::sys_days week_start(std::chrono::sys_days day) {
  using namespace std::chrono;
  const weekday wd{day};
  return day - (wd - Monday);
}

std::string format_date(std::chrono::sys_days day) {
  using namespace std::chrono;
  const year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace rumor
