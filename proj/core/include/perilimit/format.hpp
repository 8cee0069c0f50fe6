#pragma once

#include <charconv>
#include <string>

namespace perilimit {

/// Shortest decimal string that parses back to exactly `x`.
inline std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

}  // namespace perilimit
