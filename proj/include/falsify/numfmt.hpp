#pragma once

#include <charconv>
#include <string>

namespace falsify {

// Shortest decimal form that round-trips to the same double. Used everywhere
// a number becomes text (formula printing, CSV/JSON output) so byte-stable
// output falls out of value determinism.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace falsify
