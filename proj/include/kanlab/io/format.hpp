#pragma once

#include <string>
#include <string_view>

namespace kanlab::io {

// Shortest round-trip decimal form via std::to_chars, so that emitting and
// re-parsing a double is exact and output files are byte-stable.
std::string format_double(double v);

// Inverse of format_double; accepts anything std::from_chars does plus
// "nan"/"inf"/"-inf".  Throws std::runtime_error (with the offending token)
// on malformed input or trailing characters.
double parse_double(std::string_view text);

}  // namespace kanlab::io
