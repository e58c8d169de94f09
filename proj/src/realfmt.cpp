#include "gibbsqc/realfmt.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace gibbsqc {

std::string format_real(double value) {
  if (value == 0.0) return "0.0";  // folds -0.0
  char buf[64];
  for (int digits = 1; digits <= 20; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  // Out of fixed-point range (huge or tiny magnitudes); 17 significant
  // digits always round-trip.
  std::snprintf(buf, sizeof buf, "%.17g", value);
  std::string s = buf;
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
    s += ".0";
  }
  return s;
}

}  // namespace gibbsqc
