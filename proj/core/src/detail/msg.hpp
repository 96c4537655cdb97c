#pragma once

#include <cstdarg>
#include <cstdio>
#include <string>

namespace polsim::detail {

// printf-style message builder for exception text
inline std::string msgf(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return std::string(buf);
}

}  // namespace polsim::detail
