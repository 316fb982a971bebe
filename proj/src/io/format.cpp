#include "kanlab/io/format.hpp"

#include <charconv>
#include <stdexcept>

namespace kanlab::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  // Shortest round-trip form always fits well inside 64 chars.
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw std::runtime_error("malformed number: '" + std::string(text) + "'");
  return v;
}

}  // namespace kanlab::io
