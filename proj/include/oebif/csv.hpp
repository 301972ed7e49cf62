#pragma once

#include <cstdio>
#include <string>

namespace oebif {

// Full-precision float formatting for CSV output (17 significant digits).
[[nodiscard]] inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace oebif
