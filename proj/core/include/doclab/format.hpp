#pragma once

#include <charconv>
#include <string>

namespace doclab {

/// Shortest round-trip decimal form of a double; deterministic, so it is safe
/// for byte-reproducible artifacts.
inline std::string fmt_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace doclab
