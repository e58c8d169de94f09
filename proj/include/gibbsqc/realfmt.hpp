#pragma once

#include <string>

namespace gibbsqc {

// Shortest fixed-point decimal that parses back to exactly the same double,
// always with at least one fractional digit: 30 -> "30.0", 42.7 -> "42.7".
// Used everywhere a real number reaches a text file or stdout.
std::string format_real(double value);

}  // namespace gibbsqc
