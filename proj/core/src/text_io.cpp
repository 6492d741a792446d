#include "goupillaud/text_io.hpp"

#include <charconv>
#include <cstdio>
#include <system_error>

#include "goupillaud/error.hpp"

namespace goupillaud {

std::string format_real(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

double parse_real(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw DomainError(ErrorKind::BadFormat, "not a number: '" + token + "'");
  return v;
}

}  // namespace goupillaud
