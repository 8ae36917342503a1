#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>

#include "pacmarl/errors.hpp"

namespace pacmarl::detail {

// Shortest decimal that round-trips to the same double.
inline std::string exact(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

inline double parse_double(std::string_view text, const char* field) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(field, "cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view text, const char* field) {
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(field, "cannot parse integer '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace pacmarl::detail
