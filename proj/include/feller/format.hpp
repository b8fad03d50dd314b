#ifndef FELLER_FORMAT_HPP_
#define FELLER_FORMAT_HPP_

#include <cstdio>
#include <string>

namespace feller {

// Round-trippable decimal text for a double (17 significant digits).
inline std::string format_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace feller

#endif  // FELLER_FORMAT_HPP_
