#pragma once

#include <charconv>
#include <string>

namespace rumor {

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace rumor
