#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace hubofs {

/// printf("%.*g") into a std::string; significant = 0 gives the shortest
/// text that parses back to the same double.
inline std::string format_g(double v, int significant = 0) {
  char buf[64];
  if (significant <= 0) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

}  // namespace hubofs
