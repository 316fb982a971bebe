#pragma once

#include <stdexcept>
#include <string>

namespace kanlab {

// Precondition violations throw std::domain_error (the CLI maps these to its
// usage-error exit code); I/O and internal failures throw std::runtime_error.
inline void expect(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

inline void expect(bool cond, const std::string& msg) {
  if (!cond) throw std::domain_error(msg);
}

}  // namespace kanlab
